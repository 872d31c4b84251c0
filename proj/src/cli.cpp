#include "treejudge/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "treejudge/config_io.hpp"
#include "treejudge/dataset.hpp"
#include "treejudge/harness.hpp"
#include "treejudge/http_backend.hpp"
#include "treejudge/log.hpp"
#include "treejudge/mock_backend.hpp"
#include "treejudge/trace_io.hpp"

namespace treejudge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPipeline = 2;

struct CliOptions {
  // backend
  std::string backend_url;
  std::string model;
  std::string generator_model;
  std::string api_key_env = "OPENAI_API_KEY";
  std::string mock_script;

  // run shape
  std::string config_file;
  std::string registry_file;
  std::string run_dir;
  std::string cases_dir;
  uint64_t seed = 0;
  int parallel = 1;
  bool no_reference = false;
  bool resume = false;
  bool require_labels = false;
  bool verbose = false;

  // search / reward overrides (applied only when the flag was passed)
  SearchConfig search;
  RewardConfig reward;
  std::string reward_mode;
  std::string ablation_mode = "mcts";

  // sweep axes
  std::string sweep_rollouts;
  std::string sweep_depth;
  std::string sweep_gamma;
  std::string sweep_delta;

  // io
  std::string dataset_path;
  std::string task_file;
  std::string out_dir;
  std::string report_input;
  std::string report_out;
  std::string formats = "json,markdown";
  bool allow_fallback = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<int> parse_int_list(const std::string& text,
                                const std::string& flag) {
  std::vector<int> values;
  for (const auto& part : split_csv(text)) {
    try {
      values.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + part + "' is not an integer");
    }
  }
  return values;
}

// defaults <- config file <- explicit flags
void layer_configs(const CLI::App& cmd, CliOptions& opts) {
  SearchConfig search_flags = opts.search;
  RewardConfig reward_flags = opts.reward;

  opts.search = SearchConfig{};
  opts.reward = RewardConfig{};

  if (!opts.config_file.empty()) {
    json doc = read_json_file(opts.config_file);
    if (doc.contains("search")) apply_json(opts.search, doc["search"]);
    if (doc.contains("reward")) apply_json(opts.reward, doc["reward"]);
  }

  auto passed = [&](const std::string& flag) {
    return cmd.count(flag) > 0;
  };
  if (passed("--rollouts")) opts.search.rollouts = search_flags.rollouts;
  if (passed("--depth")) opts.search.max_depth = search_flags.max_depth;
  if (passed("--alpha")) opts.search.alpha = search_flags.alpha;
  if (passed("--w-l")) {
    opts.search.w_l = search_flags.w_l;
    opts.search.w_u = 1.0 - search_flags.w_l;
  }
  if (passed("--beta")) opts.reward.beta = reward_flags.beta;
  if (passed("--gamma")) opts.reward.gamma = reward_flags.gamma;
  if (passed("--delta")) opts.reward.delta = reward_flags.delta;
  if (passed("--epsilon")) opts.reward.epsilon = reward_flags.epsilon;
  if (!opts.reward_mode.empty()) {
    auto mode = reward_mode_from_string(opts.reward_mode);
    if (!mode) throw UsageError("unknown reward mode '" + opts.reward_mode + "'");
    opts.reward.mode = *mode;
  }
  opts.search.rng_seed = opts.seed;
}

EvaluatorRegistry load_registry(const CliOptions& opts) {
  if (!opts.registry_file.empty()) {
    return EvaluatorRegistry::load(opts.registry_file);
  }
  return EvaluatorRegistry::builtin();
}

struct BackendSetup {
  BackendFactory factory;
  std::function<std::unique_ptr<LlmBackend>(const std::string& task_id,
                                            uint64_t seed)>
      generator_factory;  // offline test generation
  json snapshot;
};

BackendSetup make_backend_setup(const CliOptions& opts) {
  BackendSetup setup;
  if (!opts.mock_script.empty()) {
    auto script = std::make_shared<MockScript>(MockScript::load(opts.mock_script));
    setup.factory = [script](const DatasetRecord&, uint64_t seed) {
      return std::make_unique<MockBackend>(*script, seed);
    };
    setup.generator_factory = [script](const std::string&, uint64_t seed) {
      return std::make_unique<MockBackend>(*script, seed);
    };
    setup.snapshot = {{"kind", "mock"}, {"script", opts.mock_script}};
    return setup;
  }

  if (opts.backend_url.empty() || opts.model.empty()) {
    throw UsageError("an HTTP backend needs --backend-url and --model "
                     "(or pass --mock <script>)");
  }
  const char* key = std::getenv(opts.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw UsageError("API key environment variable " + opts.api_key_env +
                     " is not set");
  }

  HttpBackendConfig base;
  base.base_url = opts.backend_url;
  base.model = opts.model;
  base.api_key = key;
  setup.factory = [base](const DatasetRecord&, uint64_t) {
    return std::make_unique<OpenAiHttpBackend>(base);
  };
  HttpBackendConfig gen = base;
  if (!opts.generator_model.empty()) gen.model = opts.generator_model;
  setup.generator_factory = [gen](const std::string&, uint64_t) {
    return std::make_unique<OpenAiHttpBackend>(gen);
  };
  setup.snapshot = {{"kind", "openai_http"},
                    {"base_url", opts.backend_url},
                    {"model", opts.model},
                    {"generator_model", opts.generator_model.empty()
                                            ? opts.model
                                            : opts.generator_model},
                    {"api_key_env", opts.api_key_env}};
  return setup;
}

// A rerun against a populated run directory must be explicit: it either
// resumes from its traces or goes to a fresh directory.
void prepare_run_dir(const CliOptions& opts) {
  if (opts.run_dir.empty()) return;
  fs::path dir(opts.run_dir);
  if (fs::exists(dir) && !fs::is_empty(dir) && !opts.resume) {
    throw UsageError("run directory '" + opts.run_dir +
                     "' is not empty; pass --resume to reuse its traces or "
                     "choose a fresh directory");
  }
  fs::create_directories(dir);
}

void write_effective_config(const CliOptions& opts, const json& backend_snapshot,
                            const std::string& command) {
  if (opts.run_dir.empty()) return;
  json j;
  j["command"] = command;
  j["search"] = to_json(opts.search);
  j["reward"] = to_json(opts.reward);
  j["backend"] = backend_snapshot;
  j["seed"] = opts.seed;
  j["parallel"] = opts.parallel;
  j["no_reference"] = opts.no_reference;
  j["registry"] = opts.registry_file.empty() ? "builtin" : opts.registry_file;
  write_json_file((fs::path(opts.run_dir) / "config.json").string(), j);
}

HarnessOptions harness_options(const CliOptions& opts) {
  HarnessOptions h;
  h.parallelism = opts.parallel;
  h.base_seed = opts.seed;
  h.use_reference = !opts.no_reference;
  h.run_dir = opts.run_dir;
  h.resume = opts.resume;
  h.cases_dir = opts.cases_dir;
  return h;
}

void write_report_files(const RunReport& report, const CliOptions& opts) {
  if (opts.run_dir.empty()) return;
  for (const auto& f : split_csv(opts.formats)) {
    if (f == "json") {
      emit_report(report, ReportFormat::kJson,
                  (fs::path(opts.run_dir) / "report.json").string());
    } else if (f == "csv") {
      emit_report(report, ReportFormat::kCsv,
                  (fs::path(opts.run_dir) / "report.csv").string());
    } else if (f == "markdown" || f == "md") {
      emit_report(report, ReportFormat::kMarkdown,
                  (fs::path(opts.run_dir) / "report.md").string());
    } else {
      throw UsageError("unknown report format '" + f + "'");
    }
  }
}

int cmd_gen_tests(const CliOptions& opts) {
  auto records = load_dataset(opts.dataset_path);
  auto setup = make_backend_setup(opts);
  fs::create_directories(opts.out_dir);

  int stored_total = 0;
  int discarded_total = 0;
  bool any_empty = false;
  for (const auto& record : records) {
    if (record.mode == TaskMode::kDiscussion) {
      std::cout << record.task_id << ": skipped (discussion mode)\n";
      continue;
    }
    const uint64_t seed = hash_seed(opts.seed, record.task_id);
    auto backend = setup.generator_factory(record.task_id, seed);
    JudgeTask task = record.to_task(!opts.no_reference);

    TestCaseStore store;
    try {
      store = build_case_store(task, opts.reward.beta, *backend);
    } catch (const std::exception& e) {
      logging::warn("task " + record.task_id +
                    ": test-case generation failed: " + e.what());
      store.task_id = record.task_id;
    }
    const auto stored = store.stored_indices().size();
    const auto discarded = store.cases.size() - stored;
    stored_total += static_cast<int>(stored);
    discarded_total += static_cast<int>(discarded);
    if (stored == 0) any_empty = true;

    store.save((fs::path(opts.out_dir) / (record.task_id + ".cases.json"))
                   .string());
    std::cout << record.task_id << ": " << stored << " stored, " << discarded
              << " discarded\n";
  }
  std::cout << "total: " << stored_total << " stored, " << discarded_total
            << " discarded\n";

  if (any_empty && !opts.allow_fallback) {
    std::cerr << "error: at least one task has zero stored test cases "
                 "(rerun with --allow-fallback to accept discussion-mode "
                 "rewards for them)\n";
    return kExitPipeline;
  }
  return kExitOk;
}

DatasetRecord load_single_task(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open task file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();

  // Accept either a bare JSON object or a single-record JSONL file.
  std::istringstream stream(text);
  auto records = parse_dataset(stream);
  if (records.size() != 1) {
    throw std::runtime_error("task file must contain exactly one record, got " +
                             std::to_string(records.size()));
  }
  return records.front();
}

int cmd_judge(const CliOptions& opts) {
  auto record = load_single_task(opts.task_file);
  auto setup = make_backend_setup(opts);
  auto registry = load_registry(opts);
  prepare_run_dir(opts);
  write_effective_config(opts, setup.snapshot, "judge");

  HarnessOptions h = harness_options(opts);
  h.parallelism = 1;
  RunReport report = run_benchmark({record}, opts.search, opts.reward,
                                   registry, setup.factory, h);
  const TaskOutcome& outcome = report.per_task.front();
  if (outcome.status != TaskOutcome::Status::kJudged) {
    std::cerr << "error: " << outcome.error << "\n";
    return kExitPipeline;
  }

  std::cout << to_string(*outcome.verdict) << "\n";
  std::cout << "h: " << to_string(outcome.h)
            << ", completion tokens: " << outcome.tokens.completion << "\n";
  if (!opts.run_dir.empty()) {
    std::cout << "trace: "
              << (fs::path(opts.run_dir) / "traces" /
                  (record.task_id + ".json"))
                     .string()
              << "\n";
  }
  return kExitOk;
}

int cmd_bench(const CliOptions& opts) {
  auto records = load_dataset(opts.dataset_path, opts.require_labels);
  auto setup = make_backend_setup(opts);
  auto registry = load_registry(opts);
  prepare_run_dir(opts);
  write_effective_config(opts, setup.snapshot, "bench");

  RunReport report = run_benchmark(records, opts.search, opts.reward, registry,
                                   setup.factory, harness_options(opts));
  write_report_files(report, opts);
  std::cout << format_report(report, ReportFormat::kMarkdown);
  return kExitOk;
}

int cmd_ablate(const CliOptions& opts) {
  auto mode = ablation_mode_from_string(opts.ablation_mode);
  if (!mode) {
    throw UsageError("unknown ablation mode '" + opts.ablation_mode +
                     "' (vanilla|majority_vote|mcts)");
  }
  auto records = load_dataset(opts.dataset_path, opts.require_labels);
  auto setup = make_backend_setup(opts);
  auto registry = load_registry(opts);
  prepare_run_dir(opts);
  write_effective_config(opts, setup.snapshot, "ablate");

  RunReport report = run_ablation(records, *mode, opts.search, opts.reward,
                                  registry, setup.factory,
                                  harness_options(opts));
  write_report_files(report, opts);
  std::cout << format_report(report, ReportFormat::kMarkdown);
  return kExitOk;
}

int cmd_sweep(const CliOptions& opts) {
  auto records = load_dataset(opts.dataset_path, opts.require_labels);
  auto setup = make_backend_setup(opts);
  auto registry = load_registry(opts);
  prepare_run_dir(opts);
  write_effective_config(opts, setup.snapshot, "sweep");

  SweepAxes axes;
  if (!opts.sweep_rollouts.empty()) {
    axes.rollouts = parse_int_list(opts.sweep_rollouts, "--rollouts");
  }
  if (!opts.sweep_depth.empty()) {
    axes.max_depth = parse_int_list(opts.sweep_depth, "--depth");
  }
  if (!opts.sweep_gamma.empty()) {
    axes.gamma = parse_int_list(opts.sweep_gamma, "--gamma");
  }
  if (!opts.sweep_delta.empty()) {
    axes.delta = parse_int_list(opts.sweep_delta, "--delta");
  }

  auto cells = run_scaling_sweep(records, opts.search, opts.reward, registry,
                                 setup.factory, harness_options(opts), axes);
  const std::string table = sweep_table_markdown(cells);
  std::cout << table;
  if (!opts.run_dir.empty()) {
    std::ofstream md((fs::path(opts.run_dir) / "sweep.md").string());
    md << table;
    std::ofstream csv((fs::path(opts.run_dir) / "sweep.csv").string());
    csv << sweep_table_csv(cells);
  }
  return kExitOk;
}

int cmd_report(const CliOptions& opts) {
  RunReport report = RunReport::from_json(read_json_file(opts.report_input));
  ReportFormat format = ReportFormat::kMarkdown;
  for (const auto& f : split_csv(opts.formats)) {
    if (f == "json") {
      format = ReportFormat::kJson;
    } else if (f == "csv") {
      format = ReportFormat::kCsv;
    } else if (f == "markdown" || f == "md") {
      format = ReportFormat::kMarkdown;
    } else {
      throw UsageError("unknown report format '" + f + "'");
    }
  }
  if (opts.report_out.empty()) {
    std::cout << format_report(report, format);
  } else {
    emit_report(report, format, opts.report_out);
  }
  return kExitOk;
}

void add_backend_options(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--backend-url", opts.backend_url,
                  "OpenAI-compatible base URL, e.g. http://host:8000/v1");
  cmd->add_option("--model", opts.model, "model name for the judge LLM");
  cmd->add_option("--generator-model", opts.generator_model,
                  "model name for test-case generation (defaults to --model)");
  cmd->add_option("--api-key-env", opts.api_key_env,
                  "environment variable holding the API key");
  cmd->add_option("--mock", opts.mock_script,
                  "mock backend script (JSON); replaces the HTTP backend");
}

void add_run_options(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--config", opts.config_file, "layered config file (JSON)");
  cmd->add_option("--registry", opts.registry_file,
                  "evaluator registry file (JSON)");
  cmd->add_option("--run-dir", opts.run_dir,
                  "directory for traces, reports, and the config snapshot");
  cmd->add_option("--cases", opts.cases_dir,
                  "directory of pre-generated test-case stores");
  cmd->add_option("--seed", opts.seed, "base RNG seed");
  cmd->add_option("--parallel", opts.parallel, "worker threads over tasks");
  cmd->add_flag("--no-reference", opts.no_reference,
                "judge without reference code");
  cmd->add_flag("--resume", opts.resume,
                "reuse per-task traces already in the run directory");
  cmd->add_flag("--verbose", opts.verbose, "info-level logging");

  cmd->add_option("--rollouts", opts.search.rollouts, "rollouts per task");
  cmd->add_option("--depth", opts.search.max_depth, "maximum tree depth");
  cmd->add_option("--alpha", opts.search.alpha, "UCT exploration constant");
  cmd->add_option("--w-l", opts.search.w_l,
                  "LLM self-assessment selection weight (w_u = 1 - w_l)");
  cmd->add_option("--beta", opts.reward.beta, "validations per test case");
  cmd->add_option("--gamma", opts.reward.gamma, "test cases sampled");
  cmd->add_option("--delta", opts.reward.delta, "simulations per test case");
  cmd->add_option("--epsilon", opts.reward.epsilon, "terminal reward");
  cmd->add_option("--reward-mode", opts.reward_mode,
                  "simulated_execution|simulated_discussion|self_consistency|"
                  "self_evaluation");
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CliOptions opts;

  CLI::App app{"Search-guided LLM judge for code correctness"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand(
      "gen-tests", "generate and validate test-case stores (offline phase)");
  gen->add_option("--dataset", opts.dataset_path, "JSONL dataset")->required();
  gen->add_option("--out", opts.out_dir, "output directory for case stores")
      ->required();
  gen->add_flag("--allow-fallback", opts.allow_fallback,
                "accept tasks with zero stored cases");
  add_backend_options(gen, opts);
  add_run_options(gen, opts);

  auto* judge = app.add_subcommand("judge", "judge a single task");
  judge->add_option("--task", opts.task_file, "task file (one JSON record)")
      ->required();
  add_backend_options(judge, opts);
  add_run_options(judge, opts);

  auto* bench = app.add_subcommand("bench", "run a labeled benchmark");
  bench->add_option("--dataset", opts.dataset_path, "JSONL dataset")
      ->required();
  bench->add_flag("--require-labels", opts.require_labels,
                  "fail on unlabeled records");
  bench->add_option("--formats", opts.formats,
                    "report formats to write (json,csv,markdown)");
  add_backend_options(bench, opts);
  add_run_options(bench, opts);

  auto* ablate = app.add_subcommand("ablate", "run an ablation mode");
  ablate->add_option("--dataset", opts.dataset_path, "JSONL dataset")
      ->required();
  ablate->add_option("--mode", opts.ablation_mode,
                     "vanilla|majority_vote|mcts");
  ablate->add_flag("--require-labels", opts.require_labels,
                   "fail on unlabeled records");
  ablate->add_option("--formats", opts.formats, "report formats to write");
  add_backend_options(ablate, opts);
  add_run_options(ablate, opts);

  auto* sweep = app.add_subcommand("sweep", "scaling sweep over compute axes");
  sweep->add_option("--dataset", opts.dataset_path, "JSONL dataset")
      ->required();
  sweep->add_option("--sweep-rollouts", opts.sweep_rollouts,
                    "comma-separated rollout counts");
  sweep->add_option("--sweep-depth", opts.sweep_depth,
                    "comma-separated tree depths");
  sweep->add_option("--sweep-gamma", opts.sweep_gamma,
                    "comma-separated test-case counts");
  sweep->add_option("--sweep-delta", opts.sweep_delta,
                    "comma-separated simulations per case");
  add_backend_options(sweep, opts);
  add_run_options(sweep, opts);

  auto* report = app.add_subcommand("report", "reformat an existing report");
  report->add_option("--input", opts.report_input, "report.json path")
      ->required();
  report->add_option("--format", opts.formats, "json|csv|markdown");
  report->add_option("--out", opts.report_out, "output path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  if (opts.verbose) logging::set_level(logging::Level::kInfo);

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (cmd != report) layer_configs(*cmd, opts);

    if (cmd == gen) return cmd_gen_tests(opts);
    if (cmd == judge) return cmd_judge(opts);
    if (cmd == bench) return cmd_bench(opts);
    if (cmd == ablate) return cmd_ablate(opts);
    if (cmd == sweep) return cmd_sweep(opts);
    if (cmd == report) return cmd_report(opts);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DatasetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace treejudge
