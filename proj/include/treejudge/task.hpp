#pragma once

#include <optional>
#include <string>

#include "treejudge/prompts.hpp"

namespace treejudge {

// Executable tasks earn rewards through simulated execution of generated
// test cases; discussion tasks (no meaningful input/output pairs: plotting,
// compression, ...) fall back to the all-positive-steps rule.
enum class TaskMode { kExecutable, kDiscussion };

std::string_view to_string(TaskMode mode);
std::optional<TaskMode> task_mode_from_string(std::string_view s);

// One evaluation instance: does `code` correctly implement `problem`?
struct JudgeTask {
  std::string task_id;
  std::string problem;
  std::string code;
  std::string language = "Python";
  std::optional<std::string> reference_code;
  std::optional<std::string> example;
  std::string difficulty = "introductory";
  TaskMode mode = TaskMode::kExecutable;
  bool use_reference = true;  // cleared for no-reference runs

  // Placeholder bindings shared by every prompt about this task. The example
  // binds to an empty string when absent; the reference solution binds to
  // the "not provided" sentinel when absent or disabled.
  Bindings base_bindings() const {
    Bindings b;
    b["problem"] = problem;
    b["code"] = code;
    b["language"] = language;
    b["example"] = example.value_or("");
    b["reference code"] = (use_reference && reference_code)
                              ? *reference_code
                              : std::string(kNoReferenceSentinel);
    b["difficulty"] = difficulty;
    return b;
  }
};

}  // namespace treejudge
