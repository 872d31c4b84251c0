#include "treejudge/backend.hpp"

#include <thread>

#include "treejudge/log.hpp"

namespace treejudge {

LlmExchange LlmBackend::complete(const std::vector<ChatMessage>& messages,
                                 const SamplingParams& params, CallTag tag) {
  if (messages.empty()) {
    throw std::invalid_argument("complete(): messages must be non-empty");
  }
  if (!params.valid()) {
    throw std::invalid_argument("complete(): invalid sampling parameters");
  }

  RawCompletion raw;
  int attempts = 0;
  auto delay = retry_.initial_backoff;
  for (;;) {
    ++attempts;
    try {
      raw = do_complete(messages, params, tag);
      break;
    } catch (const TransportError& e) {
      if (attempts > retry_.max_retries) {
        throw TransportError(e.reason, attempts);
      }
      logging::warn("transport failure on " + std::string(to_string(tag)) +
                    " call (attempt " + std::to_string(attempts) +
                    "): " + e.reason);
      if (delay.count() > 0) std::this_thread::sleep_for(delay);
      delay = std::chrono::milliseconds(
          static_cast<int64_t>(static_cast<double>(delay.count()) *
                               retry_.backoff_factor));
    }
  }

  LlmExchange exchange;
  exchange.request_messages = messages;
  exchange.params = params;
  exchange.response_text = raw.text;
  exchange.prompt_tokens = raw.prompt_tokens;
  exchange.completion_tokens = raw.completion_tokens;
  exchange.backend_id = id();
  exchange.call_tag = tag;
  exchange.sequence = trace_.append(exchange);

  if (raw.text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw DegenerateResponseError("backend '" + id() +
                                  "' returned an empty completion");
  }
  return exchange;
}

}  // namespace treejudge
