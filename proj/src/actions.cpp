#include "treejudge/actions.hpp"

#include <algorithm>
#include <stdexcept>

namespace treejudge {
namespace {

std::string history_names(const EvaluatorRegistry& registry,
                          const std::vector<SubtaskOutcome>& history) {
  if (history.empty()) return std::string(kEmptyHistorySentinel);
  std::string joined;
  for (const auto& outcome : history) {
    if (!joined.empty()) joined += ", ";
    const EvaluatorSpec* spec = registry.find(outcome.dimension_id);
    joined += spec ? spec->display_name : outcome.dimension_id;
  }
  return joined;
}

const EvaluatorSpec& spec_for(const EvaluatorRegistry& registry,
                              const Action& action) {
  if (action.is_null()) {
    throw std::invalid_argument("null action has no evaluator");
  }
  if (action.dimension < 0 ||
      action.dimension >= static_cast<int>(registry.size())) {
    throw std::invalid_argument("action dimension out of registry range");
  }
  return registry.at(static_cast<std::size_t>(action.dimension));
}

}  // namespace

SubtaskOutcome execute_subtask(const JudgeTask& task,
                               const EvaluatorRegistry& registry,
                               const Action& action,
                               const std::vector<SubtaskOutcome>& history,
                               LlmBackend& llm) {
  const EvaluatorSpec& spec = spec_for(registry, action);
  const bool repeated =
      std::any_of(history.begin(), history.end(), [&](const auto& outcome) {
        return outcome.dimension_id == spec.dimension_id;
      });
  if (repeated) {
    throw std::invalid_argument("dimension '" + spec.dimension_id +
                                "' already evaluated on this trajectory");
  }

  Bindings bindings = task.base_bindings();
  bindings["task"] = spec.task;
  bindings["steps"] = spec.steps;
  bindings["dimension"] = spec.label;

  const auto& prompts = PromptRegistry::builtin();
  SamplingParams params;

  auto analysis = llm.complete(prompts.render("subtask", bindings), params,
                               CallTag::kSubtask);

  Bindings summary_bindings;
  summary_bindings["analysis"] = analysis.response_text;
  auto summary = llm.complete(prompts.render("summarize", summary_bindings),
                              params, CallTag::kSummarize);

  SubtaskOutcome outcome;
  outcome.dimension_id = spec.dimension_id;
  outcome.analysis_text = analysis.response_text;
  outcome.verdict =
      unparseable_as_no(parse_binary_verdict(summary.response_text),
                        "summarize(" + spec.dimension_id + ")");
  return outcome;
}

AssessDecision self_assess(const JudgeTask& task,
                           const EvaluatorRegistry& registry,
                           const Action& candidate,
                           const std::vector<SubtaskOutcome>& history,
                           LlmBackend& llm) {
  const EvaluatorSpec& spec = spec_for(registry, candidate);

  Bindings bindings = task.base_bindings();
  bindings["agent"] = spec.display_name;
  bindings["history"] = history_names(registry, history);

  const auto& prompts = PromptRegistry::builtin();
  auto exchange = llm.complete(prompts.render("self_assess", bindings),
                               SamplingParams{}, CallTag::kSelfAssess);

  switch (parse_binary_verdict(exchange.response_text)) {
    case ParsedVerdict::kNo:
      return AssessDecision::kSkip;
    case ParsedVerdict::kYes:
      return AssessDecision::kInclude;
    case ParsedVerdict::kUnparseable:
      // The prompt instructs "Otherwise, please respond 'Yes'"; inclusion is
      // the stated default.
      return AssessDecision::kInclude;
  }
  return AssessDecision::kInclude;
}

Verdict global_evaluate(const JudgeTask& task, LlmBackend& llm) {
  const auto& prompts = PromptRegistry::builtin();
  auto exchange = llm.complete(prompts.render("global_eval", task.base_bindings()),
                               SamplingParams{}, CallTag::kGlobalEval);
  return unparseable_as_no(parse_binary_verdict(exchange.response_text),
                           "global_eval");
}

}  // namespace treejudge
