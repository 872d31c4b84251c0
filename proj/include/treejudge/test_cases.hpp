#pragma once

#include <string>
#include <vector>

#include "treejudge/backend.hpp"
#include "treejudge/rng.hpp"
#include "treejudge/task.hpp"
#include "treejudge/verdict.hpp"

namespace treejudge {

enum class CaseStatus { kStored, kDiscarded };

// One input/expected-output pair plus its validation record. Input and
// expected output are preserved verbatim from the reformatting step.
struct TestCase {
  std::string function_name;
  std::string input;
  std::string expected_output;
  std::string explanation;
  std::vector<Vote> validation_votes;
  CaseStatus status = CaseStatus::kDiscarded;

  // Prompt renderings of the pair: full shows the expected output (test-case
  // validation, output comparison); masked hides it (execution simulation).
  std::string render_full() const;
  std::string render_masked() const;

  bool operator==(const TestCase&) const = default;
};

// The per-task store the offline generation phase produces and the reward
// phase consumes. Immutable once built; persisted as one JSON file per task.
struct TestCaseStore {
  std::string task_id;
  std::vector<TestCase> cases;

  std::vector<std::size_t> stored_indices() const;

  std::string to_json_text() const;
  static TestCaseStore parse(const std::string& json_text);
  void save(const std::string& path) const;
  static TestCaseStore load(const std::string& path);
};

// Step 1 of the recipe: one generation call producing candidate cases with
// brief explanations, as free text. The requested count (five) is advisory;
// whatever the response contains is kept. A degenerate response is retried
// once; a second failure propagates DegenerateResponseError and the caller
// falls back to discussion-mode rewards.
std::string generate_test_cases(const std::string& problem,
                                const std::string& difficulty,
                                LlmBackend& llm);

// Step 2: reformat the free text into structured pairs via the JSON
// reformation prompt. Non-string inputs/outputs are coerced to their JSON
// text. An unparseable response is retried once, then the batch is discarded
// (empty list) with a warning.
std::vector<TestCase> reformat_cases(const std::string& problem,
                                     const std::string& raw_cases,
                                     LlmBackend& llm);

// Step 3: beta independent self-evaluations of one candidate pair. Stored on
// a strict majority of PASS votes; unparseable responses count as FAIL.
TestCase validate_case(const std::string& problem, TestCase candidate,
                       int beta, LlmBackend& llm);

// Runs the complete offline recipe for one task.
TestCaseStore build_case_store(const JudgeTask& task, int beta,
                               LlmBackend& llm);

}  // namespace treejudge
