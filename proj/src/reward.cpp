#include "treejudge/reward.hpp"

#include <algorithm>

#include "treejudge/actions.hpp"
#include "treejudge/log.hpp"

namespace treejudge {

std::string_view to_string(RewardMode mode) {
  switch (mode) {
    case RewardMode::kSimulatedExecution: return "simulated_execution";
    case RewardMode::kSimulatedDiscussion: return "simulated_discussion";
    case RewardMode::kSelfConsistency: return "self_consistency";
    case RewardMode::kSelfEvaluation: return "self_evaluation";
  }
  return "simulated_execution";
}

std::optional<RewardMode> reward_mode_from_string(std::string_view s) {
  if (s == "simulated_execution") return RewardMode::kSimulatedExecution;
  if (s == "simulated_discussion") return RewardMode::kSimulatedDiscussion;
  if (s == "self_consistency") return RewardMode::kSelfConsistency;
  if (s == "self_evaluation") return RewardMode::kSelfEvaluation;
  return std::nullopt;
}

std::string_view to_string(HValue h) {
  switch (h) {
    case HValue::kCorrect: return "correct";
    case HValue::kIncorrect: return "incorrect";
    case HValue::kNotComputed: return "not_computed";
  }
  return "not_computed";
}

double terminal_reward(Verdict prediction, HValue h, double epsilon) {
  if (h == HValue::kNotComputed) return 0.0;
  const bool agree = (prediction == Verdict::kYes && h == HValue::kCorrect) ||
                     (prediction == Verdict::kNo && h == HValue::kIncorrect);
  return agree ? epsilon : 0.0;
}

double discussion_reward(const Trajectory& trajectory, double epsilon) {
  if (trajectory.global_eval != Verdict::kYes) return 0.0;
  for (const auto& step : trajectory.steps) {
    if (step.outcome && step.outcome->verdict != Verdict::kYes) return 0.0;
  }
  return epsilon;  // vacuously true for an all-null trajectory
}

CaseExecution simulate_execution(const JudgeTask& task, const TestCase& tcase,
                                 std::size_t case_index, int delta,
                                 LlmBackend& llm) {
  if (tcase.status != CaseStatus::kStored) {
    throw std::invalid_argument("simulate_execution: case is not stored");
  }
  if (delta <= 0) {
    throw std::invalid_argument("simulate_execution: delta must be positive");
  }

  const auto& prompts = PromptRegistry::builtin();

  Bindings exec_bindings = task.base_bindings();
  exec_bindings["test_case"] = tcase.render_masked();  // output stays hidden
  const auto exec_messages = prompts.render("simulate_exec", exec_bindings);

  CaseExecution record;
  record.case_index = case_index;
  int matches = 0;
  for (int i = 0; i < delta; ++i) {
    auto exec = llm.complete(exec_messages, SamplingParams{},
                             CallTag::kSimulateExec);

    Bindings cmp_bindings = task.base_bindings();
    cmp_bindings["test_case"] = tcase.render_full();
    cmp_bindings["answer"] = exec.response_text;
    auto cmp = llm.complete(prompts.render("compare_output", cmp_bindings),
                            SamplingParams{}, CallTag::kCompareOutput);

    MatchVote vote = parse_match(cmp.response_text);
    record.simulated_outputs.push_back(exec.response_text);
    record.match_votes.push_back(vote);
    if (vote == MatchVote::kMatch) ++matches;
  }
  record.case_passed = 2 * matches > delta;
  return record;
}

ExecutionVerdict compute_h(const JudgeTask& task, const TestCaseStore& store,
                           const RewardConfig& cfg, LlmBackend& llm,
                           Rng& rng) {
  std::vector<std::size_t> stored = store.stored_indices();
  if (stored.empty()) {
    throw std::invalid_argument("compute_h: no stored test cases");
  }

  // Partial Fisher-Yates: min(gamma, available) draws without replacement.
  const std::size_t take =
      std::min(stored.size(), static_cast<std::size_t>(cfg.gamma));
  for (std::size_t i = 0; i < take; ++i) {
    std::size_t j = i + rng.uniform_index(stored.size() - i);
    std::swap(stored[i], stored[j]);
  }
  stored.resize(take);

  ExecutionVerdict verdict;
  bool all_passed = true;
  for (std::size_t index : stored) {
    CaseExecution record =
        simulate_execution(task, store.cases[index], index, cfg.delta, llm);
    all_passed = all_passed && record.case_passed;
    verdict.per_case.push_back(std::move(record));
  }
  verdict.h = all_passed ? HValue::kCorrect : HValue::kIncorrect;
  return verdict;
}

namespace {

class DiscussionReward final : public RewardStrategy {
 public:
  explicit DiscussionReward(const RewardConfig& cfg) : epsilon_(cfg.epsilon) {}

  double terminal(const JudgeTask&, const Trajectory& trajectory, LlmBackend&,
                  Rng&) override {
    return discussion_reward(trajectory, epsilon_);
  }

  std::string_view name() const override { return "simulated_discussion"; }

 private:
  double epsilon_;
};

class SimulatedExecutionReward final : public RewardStrategy {
 public:
  SimulatedExecutionReward(const RewardConfig& cfg,
                           SimulatedExecutionOptions options)
      : cfg_(cfg), options_(std::move(options)) {}

  void prepare(const JudgeTask& task, LlmBackend& llm, Rng& rng) override {
    (void)rng;
    if (options_.preloaded_store) {
      store_ = *options_.preloaded_store;
    } else {
      LlmBackend& generator =
          options_.generator != nullptr ? *options_.generator : llm;
      try {
        store_ = build_case_store(task, cfg_.beta, generator);
      } catch (const DegenerateResponseError&) {
        logging::warn("task " + task.task_id +
                      ": test-case generation failed; falling back to "
                      "discussion-mode rewards");
        fallback_ = true;
        return;
      }
    }
    if (store_.stored_indices().empty()) {
      logging::warn("task " + task.task_id +
                    ": no stored test cases; falling back to "
                    "discussion-mode rewards");
      fallback_ = true;
    }
  }

  double terminal(const JudgeTask& task, const Trajectory& trajectory,
                  LlmBackend& llm, Rng& rng) override {
    if (fallback_) return discussion_reward(trajectory, cfg_.epsilon);
    // h(x) depends on the task only, never on the trajectory; compute the
    // execution verdict at the first max-depth arrival and reuse it.
    if (!verdict_) {
      verdict_ = compute_h(task, store_, cfg_, llm, rng);
    }
    return terminal_reward(trajectory.prediction, verdict_->h, cfg_.epsilon);
  }

  HValue h_value() const override {
    return verdict_ ? verdict_->h : HValue::kNotComputed;
  }

  const ExecutionVerdict* execution_verdict() const override {
    return verdict_ ? &*verdict_ : nullptr;
  }

  std::string_view name() const override { return "simulated_execution"; }

  const TestCaseStore& store() const { return store_; }

 private:
  RewardConfig cfg_;
  SimulatedExecutionOptions options_;
  TestCaseStore store_;
  std::optional<ExecutionVerdict> verdict_;
  bool fallback_ = false;
};

class SelfConsistencyReward final : public RewardStrategy {
 public:
  explicit SelfConsistencyReward(const RewardConfig& cfg) : cfg_(cfg) {}

  double terminal(const JudgeTask& task, const Trajectory& trajectory,
                  LlmBackend& llm, Rng&) override {
    // Independent vanilla judgments are drawn once per task; their majority
    // plays the role h(x) plays for simulated execution.
    if (!majority_) {
      int yes = 0;
      for (int i = 0; i < cfg_.consistency_samples; ++i) {
        if (global_evaluate(task, llm) == Verdict::kYes) ++yes;
      }
      majority_ = 2 * yes > cfg_.consistency_samples ? Verdict::kYes
                                                     : Verdict::kNo;
    }
    return trajectory.prediction == *majority_ ? cfg_.epsilon : 0.0;
  }

  std::string_view name() const override { return "self_consistency"; }

 private:
  RewardConfig cfg_;
  std::optional<Verdict> majority_;
};

class SelfEvaluationReward final : public RewardStrategy {
 public:
  explicit SelfEvaluationReward(const RewardConfig& cfg) : cfg_(cfg) {}

  double terminal(const JudgeTask& task, const Trajectory& trajectory,
                  LlmBackend& llm, Rng&) override {
    std::string steps_text;
    int step_number = 0;
    for (const auto& step : trajectory.steps) {
      if (!step.outcome) continue;
      steps_text += std::to_string(++step_number) + ". [" +
                    step.outcome->dimension_id + " -> " +
                    std::string(to_string(step.outcome->verdict)) + "] " +
                    step.outcome->analysis_text + "\n";
    }
    if (steps_text.empty()) steps_text = "(no evaluation steps)\n";

    Bindings bindings;
    bindings["problem"] = task.problem;
    bindings["history"] = steps_text;
    bindings["answer"] = std::string(to_string(trajectory.prediction));
    auto exchange = llm.complete(
        PromptRegistry::builtin().render("rm_self_eval", bindings),
        SamplingParams{}, CallTag::kSelfAssess);

    // Yes = "free of errors". Anything else, including garbage, earns 0.
    return parse_binary_verdict(exchange.response_text) == ParsedVerdict::kYes
               ? cfg_.epsilon
               : 0.0;
  }

  std::string_view name() const override { return "self_evaluation"; }

 private:
  RewardConfig cfg_;
};

}  // namespace

std::unique_ptr<RewardStrategy> make_simulated_execution_reward(
    const RewardConfig& cfg, SimulatedExecutionOptions options) {
  return std::make_unique<SimulatedExecutionReward>(cfg, std::move(options));
}

std::unique_ptr<RewardStrategy> make_discussion_reward(
    const RewardConfig& cfg) {
  return std::make_unique<DiscussionReward>(cfg);
}

std::unique_ptr<RewardStrategy> make_self_consistency_reward(
    const RewardConfig& cfg) {
  return std::make_unique<SelfConsistencyReward>(cfg);
}

std::unique_ptr<RewardStrategy> make_self_evaluation_reward(
    const RewardConfig& cfg) {
  return std::make_unique<SelfEvaluationReward>(cfg);
}

std::unique_ptr<RewardStrategy> make_reward_strategy(
    const RewardConfig& cfg, SimulatedExecutionOptions options) {
  switch (cfg.mode) {
    case RewardMode::kSimulatedExecution:
      return make_simulated_execution_reward(cfg, std::move(options));
    case RewardMode::kSimulatedDiscussion:
      return make_discussion_reward(cfg);
    case RewardMode::kSelfConsistency:
      return make_self_consistency_reward(cfg);
    case RewardMode::kSelfEvaluation:
      return make_self_evaluation_reward(cfg);
  }
  return make_discussion_reward(cfg);
}

}  // namespace treejudge
