#pragma once

#include <string>

#include <json.hpp>

#include "treejudge/backend.hpp"
#include "treejudge/evaluators.hpp"
#include "treejudge/search.hpp"

namespace treejudge {

// Serializations used by the per-task trace documents and the run reports.
nlohmann::json exchange_to_json(const LlmExchange& exchange);
nlohmann::json tree_to_json(const SearchNode& node,
                            const EvaluatorRegistry& registry);
nlohmann::json trajectory_to_json(const Trajectory& trajectory,
                                  const EvaluatorRegistry& registry);

// The complete per-task trace: final verdict, search tree (Q, N, actions),
// every trajectory, and every LLM exchange. One JSON document per task.
nlohmann::json build_task_trace(const JudgeTask& task,
                                const JudgeResult& result,
                                const EvaluatorRegistry& registry,
                                const ExchangeTrace& trace);

void write_json_file(const std::string& path, const nlohmann::json& doc);
nlohmann::json read_json_file(const std::string& path);

}  // namespace treejudge
