#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace treejudge {

// One evaluation perspective. `task` fills the {task} slot of the subtask
// analysis prompt ("Your task is to ..."), `steps` fills the Evaluation
// Steps rubric, and `label` names the analysis in the assistant opener.
struct EvaluatorSpec {
  std::string dimension_id;
  std::string display_name;
  std::string task;
  std::string steps;
  std::string label;
};

/**
 * Ordered set of evaluation dimensions forming the search's action space.
 *
 * The built-in registry holds nine perspectives so a depth-9 tree can offer
 * a fresh dimension plus the null action at every level. Registry order is
 * the deterministic ordering used for action sets and tie-breaks.
 */
class EvaluatorRegistry {
 public:
  static const EvaluatorRegistry& builtin();
  static EvaluatorRegistry parse(const std::string& json_text);
  static EvaluatorRegistry load(const std::string& path);

  std::size_t size() const { return specs_.size(); }
  const EvaluatorSpec& at(std::size_t i) const { return specs_.at(i); }
  const EvaluatorSpec* find(std::string_view dimension_id) const;
  int index_of(std::string_view dimension_id) const;  // -1 when absent
  const std::vector<EvaluatorSpec>& specs() const { return specs_; }

 private:
  std::vector<EvaluatorSpec> specs_;
};

}  // namespace treejudge
