#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "treejudge/actions.hpp"
#include "treejudge/evaluators.hpp"
#include "treejudge/reward.hpp"
#include "treejudge/rng.hpp"
#include "treejudge/task.hpp"
#include "treejudge/trajectory.hpp"

namespace treejudge {

struct SearchConfig {
  int max_depth = 9;   // k
  int rollouts = 8;    // n
  double alpha = 3.0;  // UCT exploration constant
  double w_u = 0.9;    // weight of the UCT pick in selection
  double w_l = 0.1;    // weight of the LLM self-assessment pick
  uint64_t rng_seed = 0;

  bool valid() const {
    return max_depth > 0 && rollouts > 0 && alpha >= 0.0 && w_u >= 0.0 &&
           w_u <= 1.0 && w_l >= 0.0 && w_l <= 1.0 &&
           std::abs(w_u + w_l - 1.0) <= 1e-9;
  }
};

/**
 * One state of the search tree.
 *
 * q accumulates backpropagated terminal rewards; n counts the completed
 * rollouts whose trajectory passes through this node. untried holds the
 * actions not yet expanded beneath this node, in registry order with the
 * null action last; it is empty exactly at maximum depth.
 */
struct SearchNode {
  Action action;  // meaningful only when !is_root
  bool is_root = false;
  std::optional<SubtaskOutcome> outcome;  // none for root and null actions
  double q = 0.0;
  int n = 0;
  int depth = 0;
  SearchNode* parent = nullptr;
  std::vector<std::unique_ptr<SearchNode>> children;
  std::vector<Action> untried;

  // Set once a completed trajectory terminates at this node; revisits reuse
  // the stored global evaluation instead of re-judging the same path.
  std::optional<std::size_t> trajectory_index;
};

// Q/N + alpha * sqrt(ln N_parent / N). Unvisited nodes score +infinity so a
// first visit always wins; selection itself never reaches them because it
// stops at nodes that still have untried actions.
double uct_value(const SearchNode& node, double alpha);

// Samples an index with probability proportional to cumulative reward,
// uniformly when every reward is zero.
std::size_t select_final(const std::vector<Trajectory>& trajectories,
                         Rng& rng);

struct JudgeResult {
  Verdict final_prediction = Verdict::kNo;
  std::size_t chosen_index = 0;
  std::vector<Trajectory> trajectories;  // distinct leaf paths, first-visit order
  HValue h_value = HValue::kNotComputed;
  TokenTotals token_totals;
  int completed_rollouts = 0;
  int aborted_rollouts = 0;
  std::unique_ptr<SearchNode> tree;  // owns the nodes Trajectory::node_path points at
  const ExchangeTrace* trace = nullptr;  // the judge backend's exchange log
};

/**
 * The tailored tree search: selection blending UCT with LLM self-assessment,
 * expansion by uniform draw from the untried actions, simulation that keeps
 * executing fresh non-null subtasks to maximum depth, and backpropagation of
 * the terminal reward through every node on the path.
 *
 * A rollout performs all fallible work (LLM calls, reward computation)
 * before touching the tree, so an aborted rollout leaves it unchanged. Each
 * aborted rollout is retried once with fresh calls.
 */
class MctsJudge {
 public:
  MctsJudge(const JudgeTask& task, const SearchConfig& cfg,
            const EvaluatorRegistry& registry, LlmBackend& llm,
            RewardStrategy& reward);
  virtual ~MctsJudge() = default;

  JudgeResult run();

  const SearchNode& root() const { return *root_; }

 protected:
  // Descends one level at a fully expanded node: with probability w_u the
  // child of maximal UCT value, with probability w_l a uniform pick among
  // the children whose action the LLM endorses (UCT fallback when none is
  // endorsed). Overridable so a pure-UCT reference can delete the LLM branch.
  virtual SearchNode* pick_child(SearchNode& node);

  SearchNode* uct_pick(SearchNode& node) const;

  const JudgeTask& task_;
  SearchConfig cfg_;
  const EvaluatorRegistry& registry_;
  LlmBackend& llm_;
  RewardStrategy& reward_;
  Rng rng_;         // selection / expansion / simulation / final sampling
  Rng reward_rng_;  // gamma-sampling and other reward-side draws

 private:
  struct PendingStep {
    Action action;
    std::optional<SubtaskOutcome> outcome;
  };

  void do_rollout();
  SearchNode* descend();
  std::vector<SubtaskOutcome> history_of(const SearchNode& node) const;

  std::unique_ptr<SearchNode> root_;
  std::vector<Trajectory> trajectories_;
};

// Convenience wrapper: constructs the engine and runs it.
JudgeResult run_judge(const JudgeTask& task, const SearchConfig& cfg,
                      const EvaluatorRegistry& registry, LlmBackend& llm,
                      RewardStrategy& reward);

}  // namespace treejudge
