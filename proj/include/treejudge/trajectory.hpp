#pragma once

#include <optional>
#include <vector>

#include "treejudge/actions.hpp"
#include "treejudge/verdict.hpp"

namespace treejudge {

struct SearchNode;  // defined in search.hpp

struct TrajectoryStep {
  Action action;
  std::optional<SubtaskOutcome> outcome;  // empty for null actions
};

// One complete root-to-max-depth reasoning path: the ordered subtask
// outcomes, the standalone global evaluation g, the majority-vote
// prediction, and the reward accumulated at its leaf across rollouts.
struct Trajectory {
  std::vector<TrajectoryStep> steps;
  Verdict global_eval = Verdict::kNo;
  Verdict prediction = Verdict::kNo;
  double cumulative_reward = 0.0;
  std::vector<SearchNode*> node_path;  // root exclusive, leaf inclusive

  std::vector<SubtaskOutcome> outcomes() const {
    std::vector<SubtaskOutcome> result;
    for (const auto& step : steps) {
      if (step.outcome) result.push_back(*step.outcome);
    }
    return result;
  }
};

// Majority vote over the non-null subtask verdicts plus the global
// evaluation. Null steps contribute nothing. A tie resolves to No.
Verdict majority_prediction(const std::vector<TrajectoryStep>& steps,
                            Verdict global_eval);

}  // namespace treejudge
