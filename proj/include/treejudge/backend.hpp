#pragma once

#include <chrono>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "treejudge/chat.hpp"

namespace treejudge {

// Transport-level failure. Carries the number of attempts made so far; the
// instance that escapes complete() reports the full attempt count.
struct TransportError : std::runtime_error {
  TransportError(std::string why, int attempts_made)
      : std::runtime_error(why + " (after " + std::to_string(attempts_made) +
                           " attempt" + (attempts_made == 1 ? "" : "s") + ")"),
        reason(std::move(why)),
        attempts(attempts_made) {}
  std::string reason;
  int attempts;
};

// The backend answered, but with nothing usable (empty/refused completion).
// Callers decide the fallback.
struct DegenerateResponseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Append-only, internally synchronized record of every exchange a backend
// instance performed. Sequence numbers are assigned on append.
class ExchangeTrace {
 public:
  uint64_t append(LlmExchange exchange) {
    std::lock_guard<std::mutex> lock(mu_);
    exchange.sequence = exchanges_.size();
    exchanges_.push_back(std::move(exchange));
    return exchanges_.back().sequence;
  }

  std::vector<LlmExchange> snapshot() const {
    std::lock_guard<std::mutex> lock(mu_);
    return exchanges_;
  }

  TokenTotals totals() const {
    std::lock_guard<std::mutex> lock(mu_);
    TokenTotals t;
    for (const auto& e : exchanges_) {
      t.prompt += e.prompt_tokens;
      t.completion += e.completion_tokens;
    }
    return t;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return exchanges_.size();
  }

 private:
  mutable std::mutex mu_;
  std::vector<LlmExchange> exchanges_;
};

/**
 * Uniform chat-completion interface over pluggable backends.
 *
 * complete() validates the request, drives the retry policy, delegates
 * transport to the implementation, and records the exchange in the
 * instance's append-only trace. A call that still fails after the retries
 * escapes as TransportError and aborts the caller's current rollout, not the
 * whole task. Implementations must be safely callable from multiple threads.
 */
class LlmBackend {
 public:
  struct RetryPolicy {
    int max_retries = 3;
    std::chrono::milliseconds initial_backoff{250};
    double backoff_factor = 2.0;
  };

  virtual ~LlmBackend() = default;

  LlmExchange complete(const std::vector<ChatMessage>& messages,
                       const SamplingParams& params, CallTag tag);

  const ExchangeTrace& trace() const { return trace_; }

  virtual std::string id() const = 0;

  void set_retry_policy(RetryPolicy policy) { retry_ = policy; }
  const RetryPolicy& retry_policy() const { return retry_; }

 protected:
  struct RawCompletion {
    std::string text;
    int64_t prompt_tokens = 0;
    int64_t completion_tokens = 0;
  };

  virtual RawCompletion do_complete(const std::vector<ChatMessage>& messages,
                                    const SamplingParams& params,
                                    CallTag tag) = 0;

 private:
  ExchangeTrace trace_;
  RetryPolicy retry_;
};

}  // namespace treejudge
