#include "treejudge/prompts.hpp"

#include <algorithm>

namespace treejudge {
namespace {

// The shared task-description block: problem, worked example, reference
// solution, and the snippet under judgment.
constexpr std::string_view kTaskBlock =
    "Problem Statement:{problem}\n"
    "Example:{example}\n"
    "Reference Solution ({language}):{reference code}\n"
    "Code Snippet ({language}):{code}";

std::vector<PromptTemplate> build_corpus() {
  std::vector<PromptTemplate> corpus;

  // Vanilla single-shot judgment; also produces the global evaluation g.
  corpus.push_back(PromptTemplate{
      "global_eval",
      CallTag::kGlobalEval,
      {
          {Role::kSystem,
           "Determine the correctness of the code snippet. Output Yes or "
           "No."},
          {Role::kUser, std::string(kTaskBlock)},
          {Role::kAssistant, "Answer (Yes or No only):"},
      }});

  // Node-selection self-assessment: should the proposed evaluator run next,
  // given what already ran on this trajectory?
  corpus.push_back(PromptTemplate{
      "self_assess",
      CallTag::kSelfAssess,
      {
          {Role::kSystem,
           "You are a code evaluation planning expert. Your task is to "
           "assess whether the suggested evaluator agent should proceed "
           "based on the provided problem statement, code snippet, and "
           "evaluation history. Determine if this evaluator will enhance "
           "coverage or completeness of the assessment."},
          {Role::kUser,
           "Problem Statement:{problem}\n"
           "Code Snippet:{language}{code}\n"
           "Proposed Next Evaluator: {agent}\n"
           "Evaluation History: Agents previously used: {history}\n"
           "Instruction: Skip the evaluation only if it very negatively "
           "affect the assessment. Otherwise, please respond 'Yes' to "
           "include the evaluator."},
          {Role::kAssistant, "Decision: (Yes or No only)"},
      }});

  // Perspective-specific analysis. {task} and {steps} come from the
  // evaluator registry; {dimension} labels the assistant opener.
  corpus.push_back(PromptTemplate{
      "subtask",
      CallTag::kSubtask,
      {
          {Role::kSystem,
           "You will be provided with a problem statement, a code snippet "
           "that supposedly addresses the problem in {language}, and a "
           "reference solution in {language}. Your task is to {task}. Do "
           "not provide a corrected version.\n"
           "Evaluation Steps:{steps}"},
          {Role::kUser, std::string(kTaskBlock)},
          {Role::kAssistant, "Evaluation ({dimension}):"},
      }});

  // Collapses free-form analysis into a binary decision. Never re-analyzes.
  corpus.push_back(PromptTemplate{
      "summarize",
      CallTag::kSummarize,
      {
          {Role::kSystem,
           "You will be provided with an analysis result of a code snippet. "
           "If the analysis believes that the code snippet is correct, "
           "output: \"Yes\". Otherwise, output: \"No\"."},
          {Role::kUser, "Analysis Result:{analysis}"},
          {Role::kAssistant, "Final Answer (Yes or No only):"},
      }});

  // Offline phase, step 1: propose candidate test cases from the problem
  // statement alone.
  corpus.push_back(PromptTemplate{
      "gen_cases",
      CallTag::kGenCases,
      {
          {Role::kSystem,
           "You are an AI assistant specializing in problem analysis and "
           "test case generation, with particular expertise in {difficulty} "
           "test cases. Your task is to generate comprehensive test cases "
           "based on the given problem description."},
          {Role::kUser,
           "Problem:{problem}\n"
           "### Instructions: Please analyze the problem statement "
           "carefully and create five well-rounded test cases. The test "
           "cases should be at {difficulty} difficulty level. Your test "
           "cases should: 1. Cover a variety of scenarios to thoroughly "
           "validate code correctness 2. Avoid excessively large "
           "computations 3. Avoid extreme edge cases unless specifically "
           "required 4. Include common use cases and reasonable boundary "
           "conditions 5. Focus on practical, real-world scenarios\n"
           "For each test case, please provide:- Input values - Expected "
           "output- Brief explanation of what the test case verifies."},
          {Role::kAssistant,
           "I'll analyze the problem systematically and create carefully "
           "curated test cases.\n"
           "**Analysis Approach:**1. First, I'll identify the key "
           "requirements and constraints 2. Then, I'll determine important "
           "edge cases and boundary conditions 3. Finally, I'll design test "
           "cases that progressively increase in complexity\n"
           "Let's examine each test case:"},
      }});

  // Offline phase, step 2: normalize the free-form cases into JSON pairs.
  corpus.push_back(PromptTemplate{
      "reformat",
      CallTag::kReformat,
      {
          {Role::kSystem,
           "You are an AI assistant specializing in test case reformatting. "
           "Your task is to extract and reformat the test cases based on "
           "the examples provided."},
          {Role::kUser,
           "Problem:{problem}\n"
           "Test Cases:{test_cases}\n"
           "### Instructions:Reformat the test cases and return them in a "
           "list of JSON format, where each test case is structured as "
           "follows:\n"
           "{{\"<root_function_name>\": {{ \"input\": \"<input>\" (as a "
           "string), \"expected_output\": \"<expected_output>\" (as a "
           "string)}}}}\n"
           "Use the main function name identified in each test case as the "
           "key. Retain the original input and output formats, ensuring "
           "that all provided test cases are included."},
          {Role::kAssistant,
           "Reformatted Test Cases only, without explanation:"},
      }});

  // Offline phase, step 3: self-evaluate one candidate pair against the
  // problem description. Repeated beta times per case.
  corpus.push_back(PromptTemplate{
      "validate",
      CallTag::kValidate,
      {
          {Role::kSystem,
           "You are an AI assistant specializing in test case validation. "
           "Your task is to assess the correctness of a given test case "
           "based on the problem description."},
          {Role::kUser,
           "Problem:{problem}\n"
           "Test Case:{test_case}\n"
           "### Instructions: Validate the correctness of the test case "
           "and determine if it aligns with the expected behavior outlined "
           "in the problem description. Do not provide a corrected version. "
           "Return PASS or FAIL to indicate the accuracy of the given test "
           "case."},
          {Role::kAssistant,
           "Let's validate the correctness of the test case step-by-step:"},
      }});

  // Execution phase: run the snippet as an interpreter on one masked input.
  corpus.push_back(PromptTemplate{
      "simulate_exec",
      CallTag::kSimulateExec,
      {
          {Role::kSystem,
           "You are an AI assistant skilled in executing {language} "
           "scripts."},
          {Role::kUser,
           "Execute the following {language} script. Analyze the code and "
           "run each subfunction in the test case step-by-step.\n"
           "Code:{code}\n"
           "Test Case:{test_case}\n"
           "Instruction: Act as a {language} interpreter to execute the "
           "code line-by-line, tracking changes in each variable throughout "
           "the process. Based on this execution trace, determine the "
           "output of the unit test case."},
          {Role::kAssistant,
           "Let's execute the code step-by-step, analyzing the input test "
           "case:"},
      }});

  // Execution phase: compare one simulated output with the stored expected
  // output, tolerant of formatting noise.
  corpus.push_back(PromptTemplate{
      "compare_output",
      CallTag::kCompareOutput,
      {
          {Role::kSystem,
           "You are an expert in code validation with a focus on comparing "
           "code execution outputs. Your goal is to determine if the actual "
           "output matches the expected behavior, being flexible about "
           "formatting and minor differences that don't affect "
           "correctness."},
          {Role::kUser,
           "Problem: {problem}\n"
           "Test Case:{test_case}\n"
           "Actual Output:{answer}\n"
           "### Instruction: 1. Extract the final execution result from the "
           "actual output. Compare this result with the expected answer, "
           "focusing on correctness rather than specific formatting. Note: "
           "Do not judge the code; simply validate whether the results "
           "match."},
          {Role::kAssistant,
           "Let's check the results, and conclude with **MATCH** or **NOT "
           "MATCH** after the comparison."},
      }});

  // Self-evaluation reward ablation: does the finished trajectory contain
  // reasoning errors? Not part of the stock pipeline.
  corpus.push_back(PromptTemplate{
      "rm_self_eval",
      CallTag::kSelfAssess,
      {
          {Role::kSystem,
           "You will be provided with a multi-step evaluation of a code "
           "snippet. Determine whether the reasoning contains any errors. "
           "If the reasoning is free of errors, output: \"Yes\". Otherwise, "
           "output: \"No\"."},
          {Role::kUser,
           "Problem Statement:{problem}\n"
           "Evaluation Steps:{history}\n"
           "Conclusion:{answer}"},
          {Role::kAssistant, "Final Answer (Yes or No only):"},
      }});

  return corpus;
}

}  // namespace

std::string render_text(std::string_view template_id, std::string_view text,
                        const Bindings& bindings) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    char c = text[i];
    if (c == '{') {
      if (i + 1 < text.size() && text[i + 1] == '{') {
        out.push_back('{');
        i += 2;
        continue;
      }
      std::size_t close = text.find('}', i + 1);
      if (close == std::string_view::npos) {
        throw std::runtime_error("template '" + std::string(template_id) +
                                 "': unterminated placeholder");
      }
      std::string name(text.substr(i + 1, close - i - 1));
      auto it = bindings.find(name);
      if (it == bindings.end()) {
        throw MissingPlaceholderError(std::string(template_id), name);
      }
      out.append(it->second);
      i = close + 1;
      continue;
    }
    if (c == '}' && i + 1 < text.size() && text[i + 1] == '}') {
      out.push_back('}');
      i += 2;
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

std::vector<std::string> PromptTemplate::placeholders() const {
  std::vector<std::string> names;
  for (const auto& seg : segments) {
    const std::string_view text = seg.text;
    for (std::size_t i = 0; i < text.size();) {
      if (text[i] == '{') {
        if (i + 1 < text.size() && text[i + 1] == '{') {
          i += 2;
          continue;
        }
        std::size_t close = text.find('}', i + 1);
        if (close == std::string_view::npos) break;
        std::string name(text.substr(i + 1, close - i - 1));
        if (std::find(names.begin(), names.end(), name) == names.end()) {
          names.push_back(name);
        }
        i = close + 1;
        continue;
      }
      if (text[i] == '}' && i + 1 < text.size() && text[i + 1] == '}') {
        i += 2;
        continue;
      }
      ++i;
    }
  }
  return names;
}

std::vector<ChatMessage> render(const PromptTemplate& tmpl,
                                const Bindings& bindings) {
  std::vector<ChatMessage> messages;
  messages.reserve(tmpl.segments.size());
  for (const auto& seg : tmpl.segments) {
    messages.push_back({seg.role, render_text(tmpl.id, seg.text, bindings)});
  }
  return messages;
}

const PromptRegistry& PromptRegistry::builtin() {
  static const PromptRegistry registry = [] {
    PromptRegistry r;
    r.templates_ = build_corpus();
    return r;
  }();
  return registry;
}

const PromptTemplate* PromptRegistry::find(std::string_view id) const {
  for (const auto& t : templates_) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

const PromptTemplate& PromptRegistry::get(std::string_view id) const {
  const PromptTemplate* t = find(id);
  if (t == nullptr) {
    throw std::out_of_range("unknown prompt template '" + std::string(id) +
                            "'");
  }
  return *t;
}

}  // namespace treejudge
