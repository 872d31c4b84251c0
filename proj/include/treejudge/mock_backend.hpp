#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "treejudge/backend.hpp"
#include "treejudge/rng.hpp"

namespace treejudge {

// One scripted behavior. A rule matches when its call tag (if any) equals the
// request's tag and its pattern (if any) occurs as a substring of the
// rendered request text. First matching rule wins.
struct MockRule {
  std::optional<CallTag> tag;  // nullopt matches every tag
  std::string pattern;         // empty matches everything

  // Exactly one response source is consulted, in this order:
  std::vector<std::string> responses;           // cycled per rule
  struct Bernoulli {
    double p = 0.5;
    std::string success;
    std::string failure;
  };
  std::optional<Bernoulli> bernoulli;            // seeded draw per hit
  int fail_transport = 0;  // first N matching hits raise TransportError
  int degenerate = 0;      // next N hits answer empty; -1 = always
};

struct MockScript {
  std::string default_response = "Yes";
  std::vector<MockRule> rules;

  static MockScript load(const std::string& path);
  static MockScript parse(const std::string& json_text);

  MockScript& add(MockRule rule) {
    rules.push_back(std::move(rule));
    return *this;
  }
};

/**
 * Deterministic scripted backend for tests, ablations, and scaling sweeps.
 *
 * Bit-reproducible: a fixed (script, seed) pair yields an identical exchange
 * trace for an identical call sequence. Rule hit counters and the Bernoulli
 * stream live per instance, so per-task instances keep parallel runs
 * independent of scheduling.
 */
class MockBackend : public LlmBackend {
 public:
  MockBackend(MockScript script, uint64_t seed)
      : script_(std::move(script)),
        rng_(seed),
        hits_(script_.rules.size(), 0) {
    set_retry_policy({3, std::chrono::milliseconds(0), 2.0});
  }

  std::string id() const override { return "mock"; }

  // Whitespace-token count; the mock's stand-in for a tokenizer.
  static int64_t count_tokens(std::string_view text);

 protected:
  RawCompletion do_complete(const std::vector<ChatMessage>& messages,
                            const SamplingParams& params,
                            CallTag tag) override;

 private:
  MockScript script_;
  Rng rng_;
  std::vector<uint64_t> hits_;
  std::mutex mu_;
};

}  // namespace treejudge
