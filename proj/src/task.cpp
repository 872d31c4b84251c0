#include "treejudge/task.hpp"

namespace treejudge {

std::string_view to_string(TaskMode mode) {
  return mode == TaskMode::kExecutable ? "executable" : "discussion";
}

std::optional<TaskMode> task_mode_from_string(std::string_view s) {
  if (s == "executable") return TaskMode::kExecutable;
  if (s == "discussion") return TaskMode::kDiscussion;
  return std::nullopt;
}

}  // namespace treejudge
