#pragma once

// Shared fixtures: canned tasks, scripted mock configurations, synthetic
// datasets with embedded oracle markers, and small tree-walking helpers.

#include <string>
#include <vector>

#include "treejudge/dataset.hpp"
#include "treejudge/mock_backend.hpp"
#include "treejudge/search.hpp"
#include "treejudge/task.hpp"

namespace treejudge::testing {

inline JudgeTask make_task(std::string id = "t0") {
  JudgeTask task;
  task.task_id = std::move(id);
  task.problem = "Return the sum of a list of integers.";
  task.code = "def sum_list(xs):\n    return sum(xs)\n";
  task.language = "Python";
  task.reference_code = "def sum_list(xs):\n    total = 0\n    for x in xs:\n"
                        "        total += x\n    return total\n";
  task.example = "sum_list([1, 2]) == 3";
  return task;
}

inline std::string canned_case_text() {
  return "Test Case 1: Input: [1, 2, 3], Expected Output: 6. Verifies basic "
         "summation.\n"
         "Test Case 2: Input: [], Expected Output: 0. Verifies the empty "
         "list.\n"
         "Test Case 3: Input: [-1, 1], Expected Output: 0. Verifies "
         "cancellation.\n"
         "Test Case 4: Input: [5], Expected Output: 5. Verifies a "
         "singleton.\n"
         "Test Case 5: Input: [10, -3, 2], Expected Output: 9. Verifies "
         "mixed signs.\n";
}

inline std::string canned_case_json() {
  return R"([{"sum_list": {"input": "[1, 2, 3]", "expected_output": "6"}},
             {"sum_list": {"input": "[]", "expected_output": "0"}},
             {"sum_list": {"input": "[-1, 1]", "expected_output": "0"}},
             {"sum_list": {"input": "[5]", "expected_output": "5"}},
             {"sum_list": {"input": "[10, -3, 2]", "expected_output": "9"}}])";
}

// Everything answers positively: analyses read as correct, cases validate
// and match, so every trajectory predicts Yes and h = Correct.
inline MockScript cooperative_script() {
  MockScript script;
  script.default_response = "Yes";
  script.add({CallTag::kGenCases, "", {canned_case_text()}, {}, 0, 0});
  script.add({CallTag::kReformat, "", {canned_case_json()}, {}, 0, 0});
  script.add({CallTag::kValidate, "", {"PASS"}, {}, 0, 0});
  script.add({CallTag::kCompareOutput, "", {"**MATCH**"}, {}, 0, 0});
  return script;
}

inline constexpr const char* kOracleYes = "[oracle:yes]";
inline constexpr const char* kOracleNo = "[oracle:no]";

// Truth-aware noisy agents: every binary judgment call answers correctly
// w.r.t. the oracle marker embedded in the task text with probability p.
inline MockScript bernoulli_script(double p) {
  MockScript script;
  script.default_response = "Yes";

  auto bern = [](double prob, std::string ok, std::string bad) {
    MockRule::Bernoulli b;
    b.p = prob;
    b.success = std::move(ok);
    b.failure = std::move(bad);
    return b;
  };

  script.add({CallTag::kSubtask, kOracleYes, {},
              bern(p, "Conclusion: the code is correct.",
                   "Conclusion: the code is incorrect."),
              0, 0});
  script.add({CallTag::kSubtask, kOracleNo, {},
              bern(p, "Conclusion: the code is incorrect.",
                   "Conclusion: the code is correct."),
              0, 0});
  // "incorrect" must be probed before "correct" (substring containment).
  script.add({CallTag::kSummarize, "incorrect", {"No"}, {}, 0, 0});
  script.add({CallTag::kSummarize, "correct", {"Yes"}, {}, 0, 0});
  script.add({CallTag::kGlobalEval, kOracleYes, {}, bern(p, "Yes", "No"), 0,
              0});
  script.add({CallTag::kGlobalEval, kOracleNo, {}, bern(p, "No", "Yes"), 0,
              0});
  script.add({CallTag::kGenCases, "", {canned_case_text()}, {}, 0, 0});
  script.add({CallTag::kReformat, "", {canned_case_json()}, {}, 0, 0});
  script.add({CallTag::kValidate, "", {"PASS"}, {}, 0, 0});
  script.add({CallTag::kSimulateExec, "", {"Simulated final output."}, {}, 0,
              0});
  script.add({CallTag::kCompareOutput, kOracleYes, {},
              bern(p, "**MATCH**", "**NOT MATCH**"), 0, 0});
  script.add({CallTag::kCompareOutput, kOracleNo, {},
              bern(p, "**NOT MATCH**", "**MATCH**"), 0, 0});
  return script;
}

inline std::vector<DatasetRecord> synthetic_records(int count,
                                                    double yes_fraction,
                                                    uint64_t seed) {
  Rng rng(seed);
  std::vector<DatasetRecord> records;
  records.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const bool truth_yes = rng.bernoulli(yes_fraction);
    const char* marker = truth_yes ? kOracleYes : kOracleNo;
    DatasetRecord r;
    r.task_id = "synthetic_" + std::to_string(i);
    r.problem_statement = std::string("Synthetic judging task ") +
                          std::to_string(i) + " " + marker +
                          ". Compute the sum of a list of integers.";
    r.candidate_code = std::string("def solve(xs):  # ") + marker +
                       "\n    return sum(xs)\n";
    r.language = "Python";
    r.ground_truth_label = truth_yes ? Verdict::kYes : Verdict::kNo;
    r.mode = TaskMode::kExecutable;
    records.push_back(std::move(r));
  }
  return records;
}

inline void collect_nodes(const SearchNode& node,
                          std::vector<const SearchNode*>& out) {
  out.push_back(&node);
  for (const auto& child : node.children) collect_nodes(*child, out);
}

inline std::vector<const SearchNode*> all_nodes(const SearchNode& root) {
  std::vector<const SearchNode*> nodes;
  collect_nodes(root, nodes);
  return nodes;
}

// Reference engine for the pure-UCT equivalence check: the LLM-driven
// selection branch does not exist at all in this build.
class PureUctJudge : public MctsJudge {
 public:
  using MctsJudge::MctsJudge;

 protected:
  SearchNode* pick_child(SearchNode& node) override { return uct_pick(node); }
};

// Wraps a strategy to record every terminal reward it issues.
class RecordingReward : public RewardStrategy {
 public:
  explicit RecordingReward(RewardStrategy& inner) : inner_(inner) {}

  void prepare(const JudgeTask& task, LlmBackend& llm, Rng& rng) override {
    inner_.prepare(task, llm, rng);
  }

  double terminal(const JudgeTask& task, const Trajectory& trajectory,
                  LlmBackend& llm, Rng& rng) override {
    double r = inner_.terminal(task, trajectory, llm, rng);
    issued.push_back(r);
    return r;
  }

  HValue h_value() const override { return inner_.h_value(); }
  std::string_view name() const override { return inner_.name(); }

  std::vector<double> issued;

 private:
  RewardStrategy& inner_;
};

}  // namespace treejudge::testing
