#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treejudge/backend.hpp"
#include "treejudge/evaluators.hpp"
#include "treejudge/task.hpp"
#include "treejudge/verdict.hpp"

namespace treejudge {

// One step of the search's action space: a perspective-specific evaluation
// subtask, or the null action representing no evaluation. Within one
// trajectory each dimension appears at most once; null may repeat.
struct Action {
  enum class Kind { kSubtask, kNull };

  Kind kind = Kind::kNull;
  int dimension = -1;  // index into the evaluator registry; -1 for null

  static Action null_action() { return Action{Kind::kNull, -1}; }
  static Action subtask(int dimension_index) {
    return Action{Kind::kSubtask, dimension_index};
  }

  bool is_null() const { return kind == Kind::kNull; }
  bool operator==(const Action&) const = default;
};

struct SubtaskOutcome {
  std::string dimension_id;
  std::string analysis_text;
  Verdict verdict = Verdict::kNo;

  bool operator==(const SubtaskOutcome&) const = default;
};

enum class AssessDecision { kInclude, kSkip };

// Runs one evaluation subtask as the two-call chain: the dimension-specific
// analysis prompt, then the summarization prompt that collapses the analysis
// into a binary verdict. The verdict derives from the analysis text only.
// Throws std::invalid_argument when the dimension already appears in
// `history` (the non-repetition invariant) or the action is null.
SubtaskOutcome execute_subtask(const JudgeTask& task,
                               const EvaluatorRegistry& registry,
                               const Action& action,
                               const std::vector<SubtaskOutcome>& history,
                               LlmBackend& llm);

// Asks whether running `candidate` next would improve the evaluation, given
// the dimensions completed so far on this trajectory. The prompt biases
// toward inclusion, so an unparseable answer maps to Include.
AssessDecision self_assess(const JudgeTask& task,
                           const EvaluatorRegistry& registry,
                           const Action& candidate,
                           const std::vector<SubtaskOutcome>& history,
                           LlmBackend& llm);

// Single whole-task judgment (the global evaluation g). Unparseable -> No.
Verdict global_evaluate(const JudgeTask& task, LlmBackend& llm);

}  // namespace treejudge
