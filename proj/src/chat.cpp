#include "treejudge/chat.hpp"

namespace treejudge {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

std::optional<Role> role_from_string(std::string_view s) {
  if (s == "system") return Role::kSystem;
  if (s == "user") return Role::kUser;
  if (s == "assistant") return Role::kAssistant;
  return std::nullopt;
}

std::string_view to_string(CallTag tag) {
  switch (tag) {
    case CallTag::kSubtask: return "subtask";
    case CallTag::kSelfAssess: return "self_assess";
    case CallTag::kSummarize: return "summarize";
    case CallTag::kGlobalEval: return "global_eval";
    case CallTag::kGenCases: return "gen_cases";
    case CallTag::kReformat: return "reformat";
    case CallTag::kValidate: return "validate";
    case CallTag::kSimulateExec: return "simulate_exec";
    case CallTag::kCompareOutput: return "compare_output";
  }
  return "subtask";
}

std::optional<CallTag> call_tag_from_string(std::string_view s) {
  if (s == "subtask") return CallTag::kSubtask;
  if (s == "self_assess") return CallTag::kSelfAssess;
  if (s == "summarize") return CallTag::kSummarize;
  if (s == "global_eval") return CallTag::kGlobalEval;
  if (s == "gen_cases") return CallTag::kGenCases;
  if (s == "reformat") return CallTag::kReformat;
  if (s == "validate") return CallTag::kValidate;
  if (s == "simulate_exec") return CallTag::kSimulateExec;
  if (s == "compare_output") return CallTag::kCompareOutput;
  return std::nullopt;
}

}  // namespace treejudge
