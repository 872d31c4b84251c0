#include <doctest.h>

#include "support.hpp"
#include "treejudge/prompts.hpp"

using namespace treejudge;

namespace {

// Binds every placeholder of `tmpl` to a unique brace-free sentinel.
Bindings sentinel_bindings(const PromptTemplate& tmpl) {
  Bindings b;
  for (const auto& name : tmpl.placeholders()) {
    b[name] = "@@" + name + "@@";
  }
  return b;
}

// Inverts a sentinel render: literal braces are re-escaped, sentinels become
// placeholders again. The result must equal the stored template text.
std::string remask(std::string rendered, const Bindings& sentinels) {
  std::string out;
  out.reserve(rendered.size());
  for (char c : rendered) {
    if (c == '{') {
      out += "{{";
    } else if (c == '}') {
      out += "}}";
    } else {
      out.push_back(c);
    }
  }
  for (const auto& [name, sentinel] : sentinels) {
    std::size_t pos = 0;
    while ((pos = out.find(sentinel, pos)) != std::string::npos) {
      out.replace(pos, sentinel.size(), "{" + name + "}");
      pos += name.size() + 2;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("registry holds one template per pipeline stage") {
  const auto& registry = PromptRegistry::builtin();
  const char* expected[] = {"global_eval",  "self_assess", "subtask",
                            "summarize",    "gen_cases",   "reformat",
                            "validate",     "simulate_exec",
                            "compare_output"};
  for (const char* id : expected) {
    CAPTURE(id);
    CHECK(registry.find(id) != nullptr);
  }
  // One template per id, no duplicates.
  for (const auto& t : registry.all()) {
    int count = 0;
    for (const auto& u : registry.all()) {
      if (u.id == t.id) ++count;
    }
    CHECK(count == 1);
  }
  CHECK_THROWS_AS((void)registry.get("no_such_prompt"), std::out_of_range);
}

TEST_CASE("vanilla prompt opens with the judgment instruction") {
  auto task = testing::make_task();
  auto messages =
      PromptRegistry::builtin().render("global_eval", task.base_bindings());
  REQUIRE(messages.size() == 3);
  CHECK(messages[0].role == Role::kSystem);
  CHECK(messages[0].content.rfind("Determine the correctness of the code "
                                  "snippet.",
                                  0) == 0);
  CHECK(messages[0].content.find("Output Yes or No") != std::string::npos);
  CHECK(messages[2].content == "Answer (Yes or No only):");
  CHECK(messages[1].content.find(task.problem) != std::string::npos);
  CHECK(messages[1].content.find(task.code) != std::string::npos);
}

TEST_CASE("interpreter prompt names the language") {
  auto task = testing::make_task();
  Bindings b = task.base_bindings();
  b["test_case"] = "{\"input\": \"[1]\"}";
  auto messages = PromptRegistry::builtin().render("simulate_exec", b);
  REQUIRE(messages.size() == 3);
  CHECK(messages[1].content.find("Act as a Python interpreter") !=
        std::string::npos);
}

TEST_CASE("missing placeholder names the offender") {
  auto task = testing::make_task();
  Bindings b = task.base_bindings();  // no {agent}, no {history}
  try {
    PromptRegistry::builtin().render("self_assess", b);
    FAIL("expected MissingPlaceholderError");
  } catch (const MissingPlaceholderError& e) {
    CHECK(e.placeholder_name == "agent");
    CHECK(std::string(e.what()).find("agent") != std::string::npos);
  }
}

TEST_CASE("rendering resolves every placeholder") {
  for (const auto& tmpl : PromptRegistry::builtin().all()) {
    CAPTURE(tmpl.id);
    auto bindings = sentinel_bindings(tmpl);
    auto messages = render(tmpl, bindings);
    REQUIRE(messages.size() == tmpl.segments.size());
    for (const auto& m : messages) {
      CHECK_FALSE(m.content.empty());
      for (const auto& name : tmpl.placeholders()) {
        CHECK(m.content.find("{" + name + "}") == std::string::npos);
      }
    }
  }
}

TEST_CASE("template round trip: render then re-mask reproduces the corpus") {
  for (const auto& tmpl : PromptRegistry::builtin().all()) {
    CAPTURE(tmpl.id);
    auto bindings = sentinel_bindings(tmpl);
    for (std::size_t i = 0; i < tmpl.segments.size(); ++i) {
      std::string rendered =
          render_text(tmpl.id, tmpl.segments[i].text, bindings);
      CHECK(remask(rendered, bindings) == tmpl.segments[i].text);
    }
  }
}

TEST_CASE("reformation prompt renders literal JSON braces") {
  Bindings b;
  b["problem"] = "p";
  b["test_cases"] = "tc";
  auto messages = PromptRegistry::builtin().render("reformat", b);
  const std::string& user = messages[1].content;
  CHECK(user.find("{\"<root_function_name>\": { \"input\": \"<input>\"") !=
        std::string::npos);
  CHECK(user.find("Retain the original input and output formats") !=
        std::string::npos);
  CHECK(user.find("{{") == std::string::npos);
}

TEST_CASE("self-assessment prompt keeps its inclusion bias") {
  auto task = testing::make_task();
  Bindings b = task.base_bindings();
  b["agent"] = "Edge and Boundary Handling";
  b["history"] = "Code Logic Correctness";
  auto messages = PromptRegistry::builtin().render("self_assess", b);
  CHECK(messages[1].content.find("Skip the evaluation only if") !=
        std::string::npos);
  CHECK(messages[1].content.find("please respond 'Yes'") != std::string::npos);
  CHECK(messages[2].content == "Decision: (Yes or No only)");
}

TEST_CASE("generation prompt asks for five cases at the bound difficulty") {
  Bindings b;
  b["problem"] = "p";
  b["difficulty"] = "introductory";
  auto messages = PromptRegistry::builtin().render("gen_cases", b);
  CHECK(messages[0].content.find("particular expertise in introductory test "
                                 "cases") != std::string::npos);
  CHECK(messages[1].content.find("create five well-rounded test cases") !=
        std::string::npos);
}

TEST_CASE("validation prompt demands PASS or FAIL") {
  Bindings b;
  b["problem"] = "p";
  b["test_case"] = "tc";
  auto messages = PromptRegistry::builtin().render("validate", b);
  CHECK(messages[1].content.find("Return PASS or FAIL") != std::string::npos);
  CHECK(messages[1].content.find("Do not provide a corrected version") !=
        std::string::npos);
}

TEST_CASE("comparison prompt concludes with MATCH markers") {
  Bindings b;
  b["problem"] = "p";
  b["test_case"] = "tc";
  b["answer"] = "42";
  auto messages = PromptRegistry::builtin().render("compare_output", b);
  CHECK(messages[2].content.find("**MATCH** or **NOT MATCH**") !=
        std::string::npos);
}

TEST_CASE("no-reference tasks bind the sentinel") {
  auto task = testing::make_task();
  task.use_reference = false;
  auto b = task.base_bindings();
  CHECK(b["reference code"] == std::string(kNoReferenceSentinel));

  auto messages = PromptRegistry::builtin().render("global_eval", b);
  CHECK(messages[1].content.find("Reference Solution (Python):not provided") !=
        std::string::npos);
}

TEST_CASE("absent example binds to an empty string") {
  auto task = testing::make_task();
  task.example.reset();
  auto b = task.base_bindings();
  CHECK(b["example"].empty());
  auto messages = PromptRegistry::builtin().render("global_eval", b);
  CHECK(messages[1].content.find("Example:\n") != std::string::npos);
}
