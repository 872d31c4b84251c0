#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "treejudge/task.hpp"
#include "treejudge/verdict.hpp"

namespace treejudge {

// One line of a line-delimited JSON dataset. Benchmarks are expected as
// pre-converted JSONL; there are no downloaders or format adapters here.
struct DatasetRecord {
  std::string task_id;
  std::string problem_statement;
  std::string candidate_code;
  std::string language = "Python";
  std::optional<std::string> reference_code;
  std::optional<std::string> example;
  std::optional<Verdict> ground_truth_label;
  TaskMode mode = TaskMode::kExecutable;
  std::string difficulty = "introductory";

  JudgeTask to_task(bool use_reference) const;
};

struct DatasetError : std::runtime_error {
  DatasetError(int line_number, const std::string& field,
               const std::string& detail)
      : std::runtime_error("dataset line " + std::to_string(line_number) +
                           ", field '" + field + "': " + detail),
        line(line_number),
        field_name(field) {}
  int line;
  std::string field_name;
};

std::vector<DatasetRecord> parse_dataset(std::istream& in,
                                         bool require_labels = false);
std::vector<DatasetRecord> load_dataset(const std::string& path,
                                        bool require_labels = false);

}  // namespace treejudge
