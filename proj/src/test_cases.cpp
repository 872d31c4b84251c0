#include "treejudge/test_cases.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "treejudge/log.hpp"

namespace treejudge {

using nlohmann::json;

namespace {

std::string coerce_to_string(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

// Accepts the documented shape {"<func>": {"input": ..., "expected_output":
// ...}} as well as the flat {"input": ..., "expected_output": ...} variant
// models sometimes produce.
TestCase parse_case_object(const json& obj) {
  TestCase tc;
  const json* body = nullptr;
  if (obj.contains("input") && obj.contains("expected_output")) {
    body = &obj;
    if (obj.contains("function_name")) {
      tc.function_name = coerce_to_string(obj["function_name"]);
    }
  } else if (obj.is_object() && obj.size() == 1) {
    auto it = obj.begin();
    tc.function_name = it.key();
    body = &it.value();
  }
  if (body == nullptr || !body->is_object()) {
    throw std::runtime_error("test case object has unrecognized shape");
  }
  tc.input = coerce_to_string(body->at("input"));
  tc.expected_output = coerce_to_string(body->at("expected_output"));
  if (body->contains("explanation")) {
    tc.explanation = coerce_to_string((*body)["explanation"]);
  }
  return tc;
}

// Models often wrap JSON in a markdown fence; strip it before parsing.
std::string strip_code_fence(const std::string& text) {
  auto start = text.find("```");
  if (start == std::string::npos) return text;
  start = text.find('\n', start);
  if (start == std::string::npos) return text;
  auto end = text.find("```", start);
  if (end == std::string::npos) return text;
  return text.substr(start + 1, end - start - 1);
}

std::vector<TestCase> parse_reformatted(const std::string& response) {
  json doc = json::parse(strip_code_fence(response));
  if (!doc.is_array()) {
    throw std::runtime_error("reformatted test cases are not a JSON list");
  }
  std::vector<TestCase> cases;
  for (const auto& item : doc) {
    cases.push_back(parse_case_object(item));
  }
  return cases;
}

}  // namespace

std::string TestCase::render_full() const {
  json j;
  j["function_name"] = function_name;
  j["input"] = input;
  j["expected_output"] = expected_output;
  return j.dump();
}

std::string TestCase::render_masked() const {
  json j;
  j["function_name"] = function_name;
  j["input"] = input;
  return j.dump();
}

std::vector<std::size_t> TestCaseStore::stored_indices() const {
  std::vector<std::size_t> indices;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (cases[i].status == CaseStatus::kStored) indices.push_back(i);
  }
  return indices;
}

std::string TestCaseStore::to_json_text() const {
  json j;
  j["task_id"] = task_id;
  j["cases"] = json::array();
  for (const auto& tc : cases) {
    json c;
    c["function_name"] = tc.function_name;
    c["input"] = tc.input;
    c["expected_output"] = tc.expected_output;
    c["explanation"] = tc.explanation;
    c["validation_votes"] = json::array();
    for (Vote v : tc.validation_votes) {
      c["validation_votes"].push_back(std::string(to_string(v)));
    }
    c["status"] = tc.status == CaseStatus::kStored ? "stored" : "discarded";
    j["cases"].push_back(std::move(c));
  }
  return j.dump(2);
}

TestCaseStore TestCaseStore::parse(const std::string& json_text) {
  json doc = json::parse(json_text);
  TestCaseStore store;
  store.task_id = doc.at("task_id").get<std::string>();
  for (const auto& c : doc.value("cases", json::array())) {
    TestCase tc;
    tc.function_name = c.at("function_name").get<std::string>();
    tc.input = c.at("input").get<std::string>();
    tc.expected_output = c.at("expected_output").get<std::string>();
    tc.explanation = c.value("explanation", "");
    for (const auto& v : c.value("validation_votes", json::array())) {
      tc.validation_votes.push_back(v.get<std::string>() == "PASS"
                                        ? Vote::kPass
                                        : Vote::kFail);
    }
    tc.status = c.value("status", "discarded") == "stored"
                    ? CaseStatus::kStored
                    : CaseStatus::kDiscarded;
    store.cases.push_back(std::move(tc));
  }
  return store;
}

void TestCaseStore::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write test-case store '" + path + "'");
  }
  out << to_json_text() << "\n";
}

TestCaseStore TestCaseStore::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open test-case store '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string generate_test_cases(const std::string& problem,
                                const std::string& difficulty,
                                LlmBackend& llm) {
  if (problem.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw std::invalid_argument("generate_test_cases: empty problem");
  }
  Bindings bindings;
  bindings["problem"] = problem;
  bindings["difficulty"] = difficulty;
  const auto messages =
      PromptRegistry::builtin().render("gen_cases", bindings);

  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      return llm.complete(messages, SamplingParams{}, CallTag::kGenCases)
          .response_text;
    } catch (const DegenerateResponseError&) {
      if (attempt == 1) throw;
      logging::warn("degenerate test-case generation response; retrying once");
    }
  }
  throw DegenerateResponseError("unreachable");
}

std::vector<TestCase> reformat_cases(const std::string& problem,
                                     const std::string& raw_cases,
                                     LlmBackend& llm) {
  if (raw_cases.empty()) {
    throw std::invalid_argument("reformat_cases: empty raw case text");
  }
  Bindings bindings;
  bindings["problem"] = problem;
  bindings["test_cases"] = raw_cases;
  const auto messages = PromptRegistry::builtin().render("reformat", bindings);

  for (int attempt = 0; attempt < 2; ++attempt) {
    auto exchange =
        llm.complete(messages, SamplingParams{}, CallTag::kReformat);
    try {
      return parse_reformatted(exchange.response_text);
    } catch (const std::exception& e) {
      logging::warn(std::string("unparseable reformatted test cases (") +
                    e.what() + ")" +
                    (attempt == 0 ? "; retrying once" : "; discarding batch"));
    }
  }
  return {};
}

TestCase validate_case(const std::string& problem, TestCase candidate,
                       int beta, LlmBackend& llm) {
  if (!candidate.validation_votes.empty()) {
    throw std::invalid_argument("validate_case: case already validated");
  }
  if (beta <= 0) {
    throw std::invalid_argument("validate_case: beta must be positive");
  }

  Bindings bindings;
  bindings["problem"] = problem;
  bindings["test_case"] = candidate.render_full();
  const auto messages = PromptRegistry::builtin().render("validate", bindings);

  int passes = 0;
  for (int i = 0; i < beta; ++i) {
    auto exchange =
        llm.complete(messages, SamplingParams{}, CallTag::kValidate);
    Vote vote = parse_pass_fail(exchange.response_text);
    candidate.validation_votes.push_back(vote);
    if (vote == Vote::kPass) ++passes;
  }
  candidate.status = 2 * passes > beta ? CaseStatus::kStored
                                       : CaseStatus::kDiscarded;
  return candidate;
}

TestCaseStore build_case_store(const JudgeTask& task, int beta,
                               LlmBackend& llm) {
  TestCaseStore store;
  store.task_id = task.task_id;

  std::string raw;
  raw = generate_test_cases(task.problem, task.difficulty, llm);
  for (TestCase& candidate : reformat_cases(task.problem, raw, llm)) {
    store.cases.push_back(
        validate_case(task.problem, std::move(candidate), beta, llm));
  }
  return store;
}

}  // namespace treejudge
