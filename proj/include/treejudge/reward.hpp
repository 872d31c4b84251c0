#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "treejudge/backend.hpp"
#include "treejudge/rng.hpp"
#include "treejudge/task.hpp"
#include "treejudge/test_cases.hpp"
#include "treejudge/trajectory.hpp"

namespace treejudge {

enum class RewardMode {
  kSimulatedExecution,
  kSimulatedDiscussion,
  kSelfConsistency,
  kSelfEvaluation,
};

std::string_view to_string(RewardMode mode);
std::optional<RewardMode> reward_mode_from_string(std::string_view s);

struct RewardConfig {
  int beta = 5;         // validations per candidate case
  int gamma = 3;        // stored cases sampled for execution
  int delta = 7;        // simulations per sampled case
  double epsilon = 1.1; // terminal reward
  RewardMode mode = RewardMode::kSimulatedExecution;
  int consistency_samples = 5;  // draws for the self-consistency ablation

  bool valid() const {
    return beta > 0 && gamma > 0 && delta > 0 && epsilon > 0.0 &&
           consistency_samples > 0;
  }
};

// The simulated-execution result h(x): Correct only if every sampled test
// case passes. NotComputed when the run never entered the execution phase
// (discussion mode, ablation reward models).
enum class HValue { kCorrect, kIncorrect, kNotComputed };

std::string_view to_string(HValue h);

struct CaseExecution {
  std::size_t case_index = 0;  // into the task's TestCaseStore
  std::vector<std::string> simulated_outputs;  // length delta
  std::vector<MatchVote> match_votes;          // length delta
  bool case_passed = false;  // strict majority of Match votes
};

struct ExecutionVerdict {
  std::vector<CaseExecution> per_case;
  HValue h = HValue::kNotComputed;
};

// epsilon when the trajectory's prediction agrees with the simulated
// execution result, otherwise 0.
double terminal_reward(Verdict prediction, HValue h, double epsilon);

// epsilon iff every non-null subtask verdict and the global evaluation are
// Yes. An all-null trajectory passes vacuously on g alone.
double discussion_reward(const Trajectory& trajectory, double epsilon);

// Runs delta simulation+comparison call pairs for one stored case, expected
// output masked from the interpreter prompt. Majority of Match votes decides
// case_passed; responses with neither token count as NotMatch.
CaseExecution simulate_execution(const JudgeTask& task, const TestCase& tcase,
                                 std::size_t case_index, int delta,
                                 LlmBackend& llm);

// Samples min(gamma, stored) cases without replacement and applies the
// all-pass rule.
ExecutionVerdict compute_h(const JudgeTask& task, const TestCaseStore& store,
                           const RewardConfig& cfg, LlmBackend& llm, Rng& rng);

/**
 * Terminal-reward strategy driven once per completed trajectory.
 *
 * prepare() runs once per task before the first rollout; terminal() is
 * invoked each time the search reaches maximum depth. Strategies never
 * mutate the search tree.
 */
class RewardStrategy {
 public:
  virtual ~RewardStrategy() = default;

  virtual void prepare(const JudgeTask& task, LlmBackend& llm, Rng& rng) {
    (void)task;
    (void)llm;
    (void)rng;
  }

  virtual double terminal(const JudgeTask& task, const Trajectory& trajectory,
                          LlmBackend& llm, Rng& rng) = 0;

  virtual HValue h_value() const { return HValue::kNotComputed; }
  virtual const ExecutionVerdict* execution_verdict() const { return nullptr; }
  virtual std::string_view name() const = 0;
};

struct SimulatedExecutionOptions {
  // Pre-built store (e.g. from the offline gen-tests step). When absent the
  // strategy builds one in prepare() via the generation recipe.
  std::optional<TestCaseStore> preloaded_store;
  // Backend for the generation phase; defaults to the judge backend.
  LlmBackend* generator = nullptr;
};

// The simulated-execution mechanism. h(x) is a function of the task alone,
// so per-case executions and the gamma-sample are computed once per task and
// reused across rollouts. Falls back to discussion-mode rewards (with a
// warning) when generation fails or no case survives validation.
std::unique_ptr<RewardStrategy> make_simulated_execution_reward(
    const RewardConfig& cfg, SimulatedExecutionOptions options = {});

std::unique_ptr<RewardStrategy> make_discussion_reward(const RewardConfig& cfg);

// Ablation RM_SC: reward iff the trajectory's prediction matches the
// majority of `consistency_samples` independent vanilla judgments (tie -> No).
std::unique_ptr<RewardStrategy> make_self_consistency_reward(
    const RewardConfig& cfg);

// Ablation RM_SE: one call asking whether the trajectory's reasoning
// contains errors; reward iff it reports none.
std::unique_ptr<RewardStrategy> make_self_evaluation_reward(
    const RewardConfig& cfg);

// Strategy factory keyed on cfg.mode.
std::unique_ptr<RewardStrategy> make_reward_strategy(
    const RewardConfig& cfg, SimulatedExecutionOptions options = {});

}  // namespace treejudge
