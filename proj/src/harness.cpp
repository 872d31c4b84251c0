#include "treejudge/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "treejudge/actions.hpp"
#include "treejudge/config_io.hpp"
#include "treejudge/log.hpp"
#include "treejudge/rng.hpp"
#include "treejudge/trace_io.hpp"

namespace treejudge {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(AblationMode mode) {
  switch (mode) {
    case AblationMode::kVanilla: return "vanilla";
    case AblationMode::kMajorityVote: return "majority_vote";
    case AblationMode::kMcts: return "mcts";
  }
  return "mcts";
}

std::optional<AblationMode> ablation_mode_from_string(std::string_view s) {
  if (s == "vanilla") return AblationMode::kVanilla;
  if (s == "majority_vote" || s == "majority") return AblationMode::kMajorityVote;
  if (s == "mcts") return AblationMode::kMcts;
  return std::nullopt;
}

namespace {

std::string trace_path(const HarnessOptions& options,
                       const std::string& task_id) {
  return (fs::path(options.run_dir) / "traces" / (task_id + ".json")).string();
}

std::optional<TaskOutcome> outcome_from_trace(const HarnessOptions& options,
                                              const DatasetRecord& record) {
  if (!options.resume || options.run_dir.empty()) return std::nullopt;
  const std::string path = trace_path(options, record.task_id);
  if (!fs::exists(path)) return std::nullopt;

  json doc = read_json_file(path);
  TaskOutcome outcome;
  outcome.task_id = record.task_id;
  outcome.status = TaskOutcome::Status::kJudged;
  outcome.verdict = doc.at("final_prediction").get<std::string>() == "Yes"
                        ? Verdict::kYes
                        : Verdict::kNo;
  outcome.label = record.ground_truth_label;
  const std::string h = doc.value("h_value", "not_computed");
  outcome.h = h == "correct"     ? HValue::kCorrect
              : h == "incorrect" ? HValue::kIncorrect
                                 : HValue::kNotComputed;
  outcome.tokens.prompt = doc.at("token_totals").value("prompt", 0);
  outcome.tokens.completion = doc.at("token_totals").value("completion", 0);
  return outcome;
}

void write_trace(const HarnessOptions& options, const JudgeTask& task,
                 const JudgeResult& result, const EvaluatorRegistry& registry,
                 const ExchangeTrace& trace) {
  if (options.run_dir.empty()) return;
  fs::create_directories(fs::path(options.run_dir) / "traces");
  write_json_file(trace_path(options, task.task_id),
                  build_task_trace(task, result, registry, trace));
}

// Discussion-mode tasks cannot run the simulated-execution mechanism; they
// shift to discussion rewards. Ablation reward models apply to either mode.
RewardConfig effective_reward_config(const DatasetRecord& record,
                                     RewardConfig cfg) {
  if (record.mode == TaskMode::kDiscussion &&
      cfg.mode == RewardMode::kSimulatedExecution) {
    cfg.mode = RewardMode::kSimulatedDiscussion;
  }
  return cfg;
}

using TaskEvaluator =
    std::function<TaskOutcome(const DatasetRecord&, uint64_t seed)>;

// Shared worker pool: an atomic cursor over the task list, results written
// into pre-sized slots so aggregation order equals dataset order.
RunReport run_tasks(const std::vector<DatasetRecord>& records,
                    const HarnessOptions& options,
                    const TaskEvaluator& evaluate) {
  const auto start = std::chrono::steady_clock::now();

  std::vector<TaskOutcome> outcomes(records.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= records.size()) return;
      const uint64_t seed = hash_seed(options.base_seed, records[i].task_id);
      if (auto cached = outcome_from_trace(options, records[i])) {
        outcomes[i] = *cached;
        continue;
      }
      outcomes[i] = evaluate(records[i], seed);
    }
  };

  const int threads =
      std::max(1, std::min<int>(options.parallelism,
                                static_cast<int>(records.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  RunReport report;
  report.per_task = std::move(outcomes);
  for (const auto& outcome : report.per_task) {
    if (outcome.status == TaskOutcome::Status::kJudged) {
      ++report.judged;
      if (outcome.label) {
        ++report.labeled;
        if (outcome.verdict == outcome.label) ++report.correct;
      }
    } else {
      ++report.unjudged;
    }
    report.token_totals += outcome.tokens;
  }
  if (report.labeled > 0) {
    report.accuracy = static_cast<double>(report.correct) /
                      static_cast<double>(report.labeled);
  }
  if (!report.per_task.empty()) {
    report.mean_completion_tokens =
        static_cast<double>(report.token_totals.completion) /
        static_cast<double>(report.per_task.size());
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

TaskOutcome unjudged_outcome(const DatasetRecord& record,
                             const std::exception& e, TokenTotals tokens) {
  logging::warn("task " + record.task_id + " unjudged: " + e.what());
  TaskOutcome outcome;
  outcome.task_id = record.task_id;
  outcome.status = TaskOutcome::Status::kUnjudged;
  outcome.label = record.ground_truth_label;
  outcome.tokens = tokens;
  outcome.error = e.what();
  return outcome;
}

TaskOutcome judge_one_mcts(const DatasetRecord& record, uint64_t seed,
                           const SearchConfig& search_cfg,
                           const RewardConfig& reward_cfg,
                           const EvaluatorRegistry& registry,
                           const BackendFactory& factory,
                           const HarnessOptions& options) {
  auto backend = factory(record, seed);
  JudgeTask task = record.to_task(options.use_reference);

  SearchConfig cfg = search_cfg;
  cfg.rng_seed = seed;

  RewardConfig rcfg = effective_reward_config(record, reward_cfg);
  SimulatedExecutionOptions exec_opts;
  if (rcfg.mode == RewardMode::kSimulatedExecution &&
      !options.cases_dir.empty()) {
    const fs::path store_path =
        fs::path(options.cases_dir) / (record.task_id + ".cases.json");
    if (fs::exists(store_path)) {
      exec_opts.preloaded_store = TestCaseStore::load(store_path.string());
    }
  }
  auto strategy = make_reward_strategy(rcfg, std::move(exec_opts));

  try {
    JudgeResult result = run_judge(task, cfg, registry, *backend, *strategy);
    result.token_totals = backend->trace().totals();
    write_trace(options, task, result, registry, backend->trace());

    TaskOutcome outcome;
    outcome.task_id = record.task_id;
    outcome.status = TaskOutcome::Status::kJudged;
    outcome.verdict = result.final_prediction;
    outcome.label = record.ground_truth_label;
    outcome.h = result.h_value;
    outcome.tokens = result.token_totals;
    return outcome;
  } catch (const std::exception& e) {
    return unjudged_outcome(record, e, backend->trace().totals());
  }
}

TaskOutcome judge_one_single_pass(const DatasetRecord& record, uint64_t seed,
                                  AblationMode mode,
                                  const EvaluatorRegistry& registry,
                                  const BackendFactory& factory,
                                  const HarnessOptions& options) {
  auto backend = factory(record, seed);
  JudgeTask task = record.to_task(options.use_reference);

  try {
    Verdict verdict;
    std::vector<TrajectoryStep> steps;
    if (mode == AblationMode::kVanilla) {
      verdict = global_evaluate(task, *backend);
    } else {
      std::vector<SubtaskOutcome> history;
      for (std::size_t i = 0; i < registry.size(); ++i) {
        Action action = Action::subtask(static_cast<int>(i));
        SubtaskOutcome outcome =
            execute_subtask(task, registry, action, history, *backend);
        history.push_back(outcome);
        steps.push_back(TrajectoryStep{action, std::move(outcome)});
      }
      verdict = majority_prediction(steps, global_evaluate(task, *backend));
    }

    if (!options.run_dir.empty()) {
      JudgeResult pseudo;  // trace shell for the treeless modes
      pseudo.final_prediction = verdict;
      pseudo.token_totals = backend->trace().totals();
      pseudo.completed_rollouts = 0;
      write_trace(options, task, pseudo, registry, backend->trace());
    }

    TaskOutcome outcome;
    outcome.task_id = record.task_id;
    outcome.status = TaskOutcome::Status::kJudged;
    outcome.verdict = verdict;
    outcome.label = record.ground_truth_label;
    outcome.tokens = backend->trace().totals();
    return outcome;
  } catch (const std::exception& e) {
    return unjudged_outcome(record, e, backend->trace().totals());
  }
}

// Everything that determines the results goes in the snapshot; execution
// shape (parallelism, run directory) deliberately does not, so reports from
// equivalent runs compare equal byte for byte.
json snapshot(const SearchConfig& search_cfg, const RewardConfig& reward_cfg,
              const EvaluatorRegistry& registry,
              const HarnessOptions& options, std::string_view flavor) {
  json j;
  j["flavor"] = std::string(flavor);
  j["search"] = to_json(search_cfg);
  j["reward"] = to_json(reward_cfg);
  j["base_seed"] = options.base_seed;
  j["use_reference"] = options.use_reference;
  j["registry_size"] = registry.size();
  return j;
}

}  // namespace

RunReport run_benchmark(const std::vector<DatasetRecord>& records,
                        const SearchConfig& search_cfg,
                        const RewardConfig& reward_cfg,
                        const EvaluatorRegistry& registry,
                        const BackendFactory& factory,
                        const HarnessOptions& options) {
  if (!search_cfg.valid()) {
    throw std::invalid_argument("run_benchmark: invalid search config");
  }
  if (!reward_cfg.valid()) {
    throw std::invalid_argument("run_benchmark: invalid reward config");
  }
  RunReport report = run_tasks(
      records, options, [&](const DatasetRecord& record, uint64_t seed) {
        return judge_one_mcts(record, seed, search_cfg, reward_cfg, registry,
                              factory, options);
      });
  report.config_snapshot =
      snapshot(search_cfg, reward_cfg, registry, options, "benchmark");
  return report;
}

RunReport run_ablation(const std::vector<DatasetRecord>& records,
                       AblationMode mode, const SearchConfig& search_cfg,
                       const RewardConfig& reward_cfg,
                       const EvaluatorRegistry& registry,
                       const BackendFactory& factory,
                       const HarnessOptions& options) {
  RunReport report;
  if (mode == AblationMode::kMcts) {
    report = run_benchmark(records, search_cfg, reward_cfg, registry, factory,
                           options);
  } else {
    report = run_tasks(
        records, options, [&](const DatasetRecord& record, uint64_t seed) {
          return judge_one_single_pass(record, seed, mode, registry, factory,
                                       options);
        });
  }
  report.config_snapshot =
      snapshot(search_cfg, reward_cfg, registry, options, to_string(mode));
  return report;
}

std::vector<SweepCell> run_scaling_sweep(
    const std::vector<DatasetRecord>& records, const SearchConfig& search_cfg,
    const RewardConfig& reward_cfg, const EvaluatorRegistry& registry,
    const BackendFactory& factory, const HarnessOptions& options,
    const SweepAxes& axes) {
  const std::vector<int> rollouts =
      axes.rollouts.empty() ? std::vector<int>{search_cfg.rollouts}
                            : axes.rollouts;
  const std::vector<int> depths = axes.max_depth.empty()
                                      ? std::vector<int>{search_cfg.max_depth}
                                      : axes.max_depth;
  const std::vector<int> gammas =
      axes.gamma.empty() ? std::vector<int>{reward_cfg.gamma} : axes.gamma;
  const std::vector<int> deltas =
      axes.delta.empty() ? std::vector<int>{reward_cfg.delta} : axes.delta;

  std::vector<SweepCell> cells;
  for (int n : rollouts) {
    for (int k : depths) {
      for (int g : gammas) {
        for (int d : deltas) {
          SearchConfig scfg = search_cfg;
          scfg.rollouts = n;
          scfg.max_depth = k;
          RewardConfig rcfg = reward_cfg;
          rcfg.gamma = g;
          rcfg.delta = d;

          HarnessOptions cell_options = options;
          if (!options.run_dir.empty()) {
            cell_options.run_dir =
                (fs::path(options.run_dir) /
                 ("cell_n" + std::to_string(n) + "_k" + std::to_string(k) +
                  "_g" + std::to_string(g) + "_d" + std::to_string(d)))
                    .string();
          }

          SweepCell cell;
          cell.rollouts = n;
          cell.max_depth = k;
          cell.gamma = g;
          cell.delta = d;
          cell.report = run_benchmark(records, scfg, rcfg, registry, factory,
                                      cell_options);
          cells.push_back(std::move(cell));
        }
      }
    }
  }
  return cells;
}

namespace {

std::string accuracy_text(const std::optional<double>& accuracy) {
  if (!accuracy) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", *accuracy * 100.0);
  return buf;
}

}  // namespace

std::string sweep_table_markdown(const std::vector<SweepCell>& cells) {
  std::ostringstream out;
  out << "| rollouts | max_depth | gamma | delta | accuracy | judged | "
         "unjudged | mean_completion_tokens |\n";
  out << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& c : cells) {
    out << "| " << c.rollouts << " | " << c.max_depth << " | " << c.gamma
        << " | " << c.delta << " | " << accuracy_text(c.report.accuracy)
        << " | " << c.report.judged << " | " << c.report.unjudged << " | "
        << c.report.mean_completion_tokens << " |\n";
  }
  return out.str();
}

std::string sweep_table_csv(const std::vector<SweepCell>& cells) {
  std::ostringstream out;
  out << "rollouts,max_depth,gamma,delta,accuracy,judged,unjudged,"
         "mean_completion_tokens\n";
  for (const auto& c : cells) {
    out << c.rollouts << "," << c.max_depth << "," << c.gamma << ","
        << c.delta << ",";
    if (c.report.accuracy) {
      out << *c.report.accuracy;
    }
    out << "," << c.report.judged << "," << c.report.unjudged << ","
        << c.report.mean_completion_tokens << "\n";
  }
  return out.str();
}

json RunReport::to_json() const {
  json j;
  if (accuracy) {
    j["accuracy"] = *accuracy;
  } else {
    j["accuracy"] = nullptr;
  }
  j["judged"] = judged;
  j["unjudged"] = unjudged;
  j["labeled"] = labeled;
  j["correct"] = correct;
  j["mean_completion_tokens"] = mean_completion_tokens;
  j["token_totals"] = {{"prompt", token_totals.prompt},
                       {"completion", token_totals.completion}};
  j["config"] = config_snapshot;
  j["wall_time_seconds"] = wall_time_seconds;
  j["per_task"] = json::array();
  for (const auto& t : per_task) {
    json row;
    row["task_id"] = t.task_id;
    row["status"] =
        t.status == TaskOutcome::Status::kJudged ? "judged" : "unjudged";
    row["verdict"] = t.verdict ? json(std::string(to_string(*t.verdict)))
                               : json(nullptr);
    row["label"] =
        t.label ? json(std::string(to_string(*t.label))) : json(nullptr);
    row["h_value"] = std::string(to_string(t.h));
    row["prompt_tokens"] = t.tokens.prompt;
    row["completion_tokens"] = t.tokens.completion;
    row["error"] = t.error;
    j["per_task"].push_back(std::move(row));
  }
  return j;
}

RunReport RunReport::from_json(const json& doc) {
  RunReport report;
  if (doc.contains("accuracy") && !doc["accuracy"].is_null()) {
    report.accuracy = doc["accuracy"].get<double>();
  }
  report.judged = doc.value("judged", 0);
  report.unjudged = doc.value("unjudged", 0);
  report.labeled = doc.value("labeled", 0);
  report.correct = doc.value("correct", 0);
  report.mean_completion_tokens = doc.value("mean_completion_tokens", 0.0);
  report.token_totals.prompt = doc.at("token_totals").value("prompt", 0);
  report.token_totals.completion = doc.at("token_totals").value("completion", 0);
  report.config_snapshot = doc.value("config", json::object());
  report.wall_time_seconds = doc.value("wall_time_seconds", 0.0);
  for (const auto& row : doc.value("per_task", json::array())) {
    TaskOutcome t;
    t.task_id = row.at("task_id").get<std::string>();
    t.status = row.value("status", "unjudged") == "judged"
                   ? TaskOutcome::Status::kJudged
                   : TaskOutcome::Status::kUnjudged;
    if (row.contains("verdict") && !row["verdict"].is_null()) {
      t.verdict = row["verdict"].get<std::string>() == "Yes" ? Verdict::kYes
                                                             : Verdict::kNo;
    }
    if (row.contains("label") && !row["label"].is_null()) {
      t.label = row["label"].get<std::string>() == "Yes" ? Verdict::kYes
                                                         : Verdict::kNo;
    }
    const std::string h = row.value("h_value", "not_computed");
    t.h = h == "correct"     ? HValue::kCorrect
          : h == "incorrect" ? HValue::kIncorrect
                             : HValue::kNotComputed;
    t.tokens.prompt = row.value("prompt_tokens", 0);
    t.tokens.completion = row.value("completion_tokens", 0);
    t.error = row.value("error", "");
    report.per_task.push_back(std::move(t));
  }
  return report;
}

std::string format_report(const RunReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson:
      return report.to_json().dump(2) + "\n";
    case ReportFormat::kCsv: {
      std::ostringstream out;
      out << "task_id,status,label,verdict,correct,h_value,prompt_tokens,"
             "completion_tokens\n";
      for (const auto& t : report.per_task) {
        out << t.task_id << ","
            << (t.status == TaskOutcome::Status::kJudged ? "judged"
                                                         : "unjudged")
            << "," << (t.label ? to_string(*t.label) : "") << ","
            << (t.verdict ? to_string(*t.verdict) : "") << ","
            << (t.label && t.verdict ? (t.label == t.verdict ? "1" : "0") : "")
            << "," << to_string(t.h) << "," << t.tokens.prompt << ","
            << t.tokens.completion << "\n";
      }
      return out.str();
    }
    case ReportFormat::kMarkdown: {
      std::ostringstream out;
      out << "# Run Report\n\n";
      out << "- Accuracy: " << accuracy_text(report.accuracy) << " ("
          << report.correct << "/" << report.labeled << " labeled)\n";
      out << "- Judged: " << report.judged
          << ", unjudged: " << report.unjudged << "\n";
      out << "- Mean completion tokens per task: "
          << report.mean_completion_tokens << "\n";
      out << "- Total tokens: prompt " << report.token_totals.prompt
          << ", completion " << report.token_totals.completion << "\n";
      out << "- Wall time: " << report.wall_time_seconds << " s\n\n";
      out << "| task_id | status | label | verdict | h |\n";
      out << "|---|---|---|---|---|\n";
      for (const auto& t : report.per_task) {
        out << "| " << t.task_id << " | "
            << (t.status == TaskOutcome::Status::kJudged ? "judged"
                                                         : "unjudged")
            << " | " << (t.label ? to_string(*t.label) : "-") << " | "
            << (t.verdict ? to_string(*t.verdict) : "-") << " | "
            << to_string(t.h) << " |\n";
      }
      return out.str();
    }
  }
  return "";
}

void emit_report(const RunReport& report, ReportFormat format,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write report '" + path + "'");
  }
  out << format_report(report, format);
}

}  // namespace treejudge
