#include "treejudge/trace_io.hpp"

#include <fstream>
#include <sstream>

namespace treejudge {

using nlohmann::json;

namespace {

std::string action_name(const Action& action,
                        const EvaluatorRegistry& registry) {
  if (action.is_null()) return "null";
  if (action.dimension >= 0 &&
      action.dimension < static_cast<int>(registry.size())) {
    return registry.at(static_cast<std::size_t>(action.dimension)).dimension_id;
  }
  return "dimension_" + std::to_string(action.dimension);
}

}  // namespace

json exchange_to_json(const LlmExchange& e) {
  json j;
  j["sequence"] = e.sequence;
  j["call_tag"] = std::string(to_string(e.call_tag));
  j["backend_id"] = e.backend_id;
  j["params"] = {{"temperature", e.params.temperature},
                 {"top_p", e.params.top_p},
                 {"top_k", e.params.top_k},
                 {"max_tokens", e.params.max_tokens}};
  j["request_messages"] = json::array();
  for (const auto& m : e.request_messages) {
    j["request_messages"].push_back(
        {{"role", std::string(to_string(m.role))}, {"content", m.content}});
  }
  j["response_text"] = e.response_text;
  j["prompt_tokens"] = e.prompt_tokens;
  j["completion_tokens"] = e.completion_tokens;
  return j;
}

json tree_to_json(const SearchNode& node, const EvaluatorRegistry& registry) {
  json j;
  j["action"] = node.is_root ? "root" : action_name(node.action, registry);
  j["q"] = node.q;
  j["n"] = node.n;
  j["depth"] = node.depth;
  if (node.outcome) {
    j["verdict"] = std::string(to_string(node.outcome->verdict));
  }
  j["children"] = json::array();
  for (const auto& child : node.children) {
    j["children"].push_back(tree_to_json(*child, registry));
  }
  return j;
}

json trajectory_to_json(const Trajectory& t,
                        const EvaluatorRegistry& registry) {
  json j;
  j["steps"] = json::array();
  for (const auto& step : t.steps) {
    json s;
    s["action"] = action_name(step.action, registry);
    if (step.outcome) {
      s["verdict"] = std::string(to_string(step.outcome->verdict));
      s["analysis"] = step.outcome->analysis_text;
    }
    j["steps"].push_back(std::move(s));
  }
  j["global_eval"] = std::string(to_string(t.global_eval));
  j["prediction"] = std::string(to_string(t.prediction));
  j["cumulative_reward"] = t.cumulative_reward;
  return j;
}

json build_task_trace(const JudgeTask& task, const JudgeResult& result,
                      const EvaluatorRegistry& registry,
                      const ExchangeTrace& trace) {
  json j;
  j["task_id"] = task.task_id;
  j["language"] = task.language;
  j["mode"] = std::string(to_string(task.mode));
  j["use_reference"] = task.use_reference;
  j["final_prediction"] = std::string(to_string(result.final_prediction));
  j["h_value"] = std::string(to_string(result.h_value));
  j["chosen_trajectory"] = result.chosen_index;
  j["completed_rollouts"] = result.completed_rollouts;
  j["aborted_rollouts"] = result.aborted_rollouts;
  j["token_totals"] = {{"prompt", result.token_totals.prompt},
                       {"completion", result.token_totals.completion}};
  if (result.tree) {
    j["tree"] = tree_to_json(*result.tree, registry);
  }
  j["trajectories"] = json::array();
  for (const auto& t : result.trajectories) {
    j["trajectories"].push_back(trajectory_to_json(t, registry));
  }
  j["exchanges"] = json::array();
  for (const auto& e : trace.snapshot()) {
    j["exchanges"].push_back(exchange_to_json(e));
  }
  return j;
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  out << doc.dump(2) << "\n";
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "'");
  }
  return json::parse(in);
}

}  // namespace treejudge
