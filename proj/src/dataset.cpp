#include "treejudge/dataset.hpp"

#include <fstream>
#include <unordered_set>

#include <json.hpp>

namespace treejudge {

using nlohmann::json;

namespace {

std::string require_string(const json& obj, const char* field, int line) {
  if (!obj.contains(field)) {
    throw DatasetError(line, field, "missing required field");
  }
  if (!obj[field].is_string()) {
    throw DatasetError(line, field, "expected a string");
  }
  return obj[field].get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* field,
                                           int line) {
  if (!obj.contains(field) || obj[field].is_null()) return std::nullopt;
  if (!obj[field].is_string()) {
    throw DatasetError(line, field, "expected a string");
  }
  return obj[field].get<std::string>();
}

}  // namespace

JudgeTask DatasetRecord::to_task(bool use_reference) const {
  JudgeTask task;
  task.task_id = task_id;
  task.problem = problem_statement;
  task.code = candidate_code;
  task.language = language;
  task.reference_code = reference_code;
  task.example = example;
  task.difficulty = difficulty;
  task.mode = mode;
  task.use_reference = use_reference;
  return task;
}

std::vector<DatasetRecord> parse_dataset(std::istream& in,
                                         bool require_labels) {
  std::vector<DatasetRecord> records;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw DatasetError(line_number, "(json)", e.what());
    }
    if (!obj.is_object()) {
      throw DatasetError(line_number, "(json)", "expected a JSON object");
    }

    DatasetRecord record;
    record.task_id = require_string(obj, "task_id", line_number);
    if (!seen_ids.insert(record.task_id).second) {
      throw DatasetError(line_number, "task_id",
                         "duplicate task_id '" + record.task_id + "'");
    }
    record.problem_statement =
        require_string(obj, "problem_statement", line_number);
    record.candidate_code = require_string(obj, "candidate_code", line_number);
    if (auto lang = optional_string(obj, "language", line_number)) {
      record.language = *lang;
    }
    record.reference_code = optional_string(obj, "reference_code", line_number);
    record.example = optional_string(obj, "example", line_number);
    if (auto difficulty = optional_string(obj, "difficulty", line_number)) {
      record.difficulty = *difficulty;
    }

    if (auto label = optional_string(obj, "ground_truth_label", line_number)) {
      if (*label == "Yes") {
        record.ground_truth_label = Verdict::kYes;
      } else if (*label == "No") {
        record.ground_truth_label = Verdict::kNo;
      } else {
        throw DatasetError(line_number, "ground_truth_label",
                           "expected \"Yes\" or \"No\", got \"" + *label +
                               "\"");
      }
    } else if (require_labels) {
      throw DatasetError(line_number, "ground_truth_label",
                         "label required but missing");
    }

    if (auto mode = optional_string(obj, "mode", line_number)) {
      auto parsed = task_mode_from_string(*mode);
      if (!parsed) {
        throw DatasetError(line_number, "mode",
                           "expected \"executable\" or \"discussion\"");
      }
      record.mode = *parsed;
    }

    records.push_back(std::move(record));
  }
  return records;
}

std::vector<DatasetRecord> load_dataset(const std::string& path,
                                        bool require_labels) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset '" + path + "'");
  }
  return parse_dataset(in, require_labels);
}

}  // namespace treejudge
