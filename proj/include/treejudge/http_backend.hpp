#pragma once

#include <chrono>
#include <string>

#include "treejudge/backend.hpp"

namespace treejudge {

struct HttpBackendConfig {
  std::string base_url;  // e.g. "http://127.0.0.1:8000/v1"
  std::string model;
  std::string api_key;   // resolved from an environment variable by the CLI
  std::chrono::seconds request_timeout{120};
  LlmBackend::RetryPolicy retry;
};

/**
 * Chat-completions client for any OpenAI-compatible HTTP service.
 *
 * Requests carry model, messages, temperature, top_p, and max_tokens; top_k
 * is advisory and not part of this wire format (it still lands in the trace
 * via the recorded sampling parameters). Responses are read from
 * choices[0].message.content with token usage from the usage block.
 */
class OpenAiHttpBackend : public LlmBackend {
 public:
  explicit OpenAiHttpBackend(HttpBackendConfig config);

  std::string id() const override { return "openai:" + config_.model; }

 protected:
  RawCompletion do_complete(const std::vector<ChatMessage>& messages,
                            const SamplingParams& params,
                            CallTag tag) override;

 private:
  HttpBackendConfig config_;
  std::string host_;  // scheme://authority
  std::string path_prefix_;
};

}  // namespace treejudge
