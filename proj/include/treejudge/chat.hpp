#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace treejudge {

enum class Role { kSystem, kUser, kAssistant };

std::string_view to_string(Role role);
std::optional<Role> role_from_string(std::string_view s);

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

// Sampling defaults follow the engine's stock configuration (temperature 0.4,
// top_p 0.95, top_k 40, 2048 max tokens). top_k is advisory: backends whose
// wire format lacks it ignore it, but it is recorded in the trace either way.
struct SamplingParams {
  double temperature = 0.4;
  double top_p = 0.95;
  int top_k = 40;  // 0 means unlimited
  int max_tokens = 2048;

  bool valid() const {
    return temperature >= 0.0 && temperature <= 2.0 && top_p > 0.0 &&
           top_p <= 1.0 && top_k >= 0 && max_tokens > 0;
  }

  bool operator==(const SamplingParams&) const = default;
};

// Every LLM call in the pipeline is labelled with the stage that issued it.
// Traces are filtered and audited by tag (e.g. the test-generation phase must
// be fully ordered before the first search rollout).
enum class CallTag {
  kSubtask,
  kSelfAssess,
  kSummarize,
  kGlobalEval,
  kGenCases,
  kReformat,
  kValidate,
  kSimulateExec,
  kCompareOutput,
};

std::string_view to_string(CallTag tag);
std::optional<CallTag> call_tag_from_string(std::string_view s);

// One prompt/response round trip, as recorded in the exchange trace.
struct LlmExchange {
  uint64_t sequence = 0;  // position in the trace, assigned on append
  std::vector<ChatMessage> request_messages;
  SamplingParams params;
  std::string response_text;
  int64_t prompt_tokens = 0;
  int64_t completion_tokens = 0;
  std::string backend_id;
  CallTag call_tag = CallTag::kSubtask;

  bool operator==(const LlmExchange&) const = default;
};

struct TokenTotals {
  int64_t prompt = 0;
  int64_t completion = 0;

  TokenTotals& operator+=(const TokenTotals& other) {
    prompt += other.prompt;
    completion += other.completion;
    return *this;
  }

  bool operator==(const TokenTotals&) const = default;
};

}  // namespace treejudge
