#include "treejudge/evaluators.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace treejudge {

using nlohmann::json;

namespace {

std::vector<EvaluatorSpec> make_builtin_specs() {
  return {
      {"code_logic", "Code Logic Correctness",
       "check if the code snippet covers the required functionalities",
       "1. Read the problem statement carefully and identify the required "
       "functionalities of the implementation. You can refer to the example "
       "and reference answer to understand the problem better. 2. Read the "
       "code snippet and analyze its logic. Check if the code snippet "
       "covers all the required functionalities of the problem. 3. Finally, "
       "conclude your evaluation.",
       "Code Logic Analysis"},

      {"requirements_coverage", "Requirements Coverage",
       "check if the code snippet addresses every requirement stated in the "
       "problem",
       "1. List the requirements stated in the problem statement, including "
       "inputs, outputs, and constraints. 2. Map each requirement to the "
       "part of the code snippet that implements it, noting any requirement "
       "that is missing or only partially handled. 3. Finally, conclude "
       "your evaluation.",
       "Requirements Coverage Analysis"},

      {"edge_cases", "Edge and Boundary Handling",
       "check if the code snippet handles edge cases and boundary "
       "conditions correctly",
       "1. Identify the edge cases and boundary conditions implied by the "
       "problem statement, such as empty inputs, extreme values, and "
       "off-by-one boundaries. 2. Trace the code snippet on each identified "
       "case and check whether its behavior is correct. 3. Finally, "
       "conclude your evaluation.",
       "Edge Case Analysis"},

      {"io_format", "Input/Output Format Conformance",
       "check if the code snippet reads its input and produces its output "
       "in the exact format required by the problem",
       "1. Determine the input and output formats required by the problem "
       "statement, including types, ordering, and textual layout. 2. Check "
       "whether the code snippet consumes the input and emits the output in "
       "exactly those formats. 3. Finally, conclude your evaluation.",
       "Input/Output Format Analysis"},

      {"algorithm_soundness", "Algorithmic Approach Soundness",
       "check if the algorithm chosen by the code snippet is a sound "
       "approach to the problem",
       "1. Identify the algorithm or strategy the code snippet implements. "
       "2. Assess whether that approach can produce correct results for "
       "the whole input domain of the problem, not just typical cases. 3. "
       "Finally, conclude your evaluation.",
       "Algorithmic Approach Analysis"},

      {"data_flow", "Data and Variable Flow Consistency",
       "check if data and variable usage in the code snippet stays "
       "consistent from initialization to final result",
       "1. Track each significant variable from initialization through "
       "every update to its final use. 2. Check for uninitialized reads, "
       "stale values, type mismatches, and results computed but never "
       "used. 3. Finally, conclude your evaluation.",
       "Data Flow Analysis"},

      {"error_handling", "Error and Exception Handling",
       "check if the code snippet deals with invalid inputs and error "
       "conditions appropriately",
       "1. Identify the failure modes the problem statement implies, such "
       "as invalid inputs, missing resources, or arithmetic corner cases. "
       "2. Check whether the code snippet detects and handles each of them "
       "in a way consistent with the problem's expectations. 3. Finally, "
       "conclude your evaluation.",
       "Error Handling Analysis"},

      {"termination_complexity", "Termination and Complexity Sanity",
       "check if the code snippet terminates on all valid inputs within "
       "reasonable time and memory",
       "1. Inspect every loop and recursion for a progress argument that "
       "guarantees termination. 2. Estimate the time and memory complexity "
       "and check it against the input sizes the problem allows. 3. "
       "Finally, conclude your evaluation.",
       "Termination and Complexity Analysis"},

      {"api_usage", "API and Library Usage Correctness",
       "check if the code snippet uses APIs and library functions correctly",
       "1. List the APIs and library functions the code snippet calls. 2. "
       "Check each call for correct arguments, return-value handling, and "
       "semantics, flagging any misuse or nonexistent function. 3. Finally, "
       "conclude your evaluation.",
       "API Usage Analysis"},
  };
}

}  // namespace

const EvaluatorRegistry& EvaluatorRegistry::builtin() {
  static const EvaluatorRegistry registry = [] {
    EvaluatorRegistry r;
    r.specs_ = make_builtin_specs();
    return r;
  }();
  return registry;
}

EvaluatorRegistry EvaluatorRegistry::parse(const std::string& json_text) {
  json doc = json::parse(json_text);
  EvaluatorRegistry r;
  for (const auto& item : doc.at("evaluators")) {
    EvaluatorSpec spec;
    spec.dimension_id = item.at("dimension_id").get<std::string>();
    spec.display_name = item.at("display_name").get<std::string>();
    spec.task = item.at("task").get<std::string>();
    spec.steps = item.at("steps").get<std::string>();
    spec.label = item.value("label", spec.display_name + " Analysis");
    if (r.find(spec.dimension_id) != nullptr) {
      throw std::runtime_error("evaluator registry: duplicate dimension_id '" +
                               spec.dimension_id + "'");
    }
    r.specs_.push_back(std::move(spec));
  }
  if (r.specs_.empty()) {
    throw std::runtime_error("evaluator registry: no evaluators defined");
  }
  return r;
}

EvaluatorRegistry EvaluatorRegistry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open evaluator registry '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const EvaluatorSpec* EvaluatorRegistry::find(
    std::string_view dimension_id) const {
  for (const auto& spec : specs_) {
    if (spec.dimension_id == dimension_id) return &spec;
  }
  return nullptr;
}

int EvaluatorRegistry::index_of(std::string_view dimension_id) const {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (specs_[i].dimension_id == dimension_id) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace treejudge
