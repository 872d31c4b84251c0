#include "treejudge/search.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "treejudge/log.hpp"

namespace treejudge {

double uct_value(const SearchNode& node, double alpha) {
  if (node.parent == nullptr) {
    throw std::invalid_argument("uct_value: node has no parent");
  }
  if (node.n == 0) {
    return std::numeric_limits<double>::infinity();
  }
  const double exploitation = node.q / static_cast<double>(node.n);
  const double exploration =
      alpha * std::sqrt(std::log(static_cast<double>(node.parent->n)) /
                        static_cast<double>(node.n));
  return exploitation + exploration;
}

Verdict majority_prediction(const std::vector<TrajectoryStep>& steps,
                            Verdict global_eval) {
  int yes = global_eval == Verdict::kYes ? 1 : 0;
  int no = global_eval == Verdict::kNo ? 1 : 0;
  for (const auto& step : steps) {
    if (!step.outcome) continue;
    if (step.outcome->verdict == Verdict::kYes) {
      ++yes;
    } else {
      ++no;
    }
  }
  return yes > no ? Verdict::kYes : Verdict::kNo;  // ties resolve to No
}

std::size_t select_final(const std::vector<Trajectory>& trajectories,
                         Rng& rng) {
  if (trajectories.empty()) {
    throw std::invalid_argument("select_final: no trajectories");
  }
  double total = 0.0;
  for (const auto& t : trajectories) total += t.cumulative_reward;
  if (total <= 0.0) {
    return rng.uniform_index(trajectories.size());
  }
  const double u = rng.uniform01() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    acc += trajectories[i].cumulative_reward;
    if (u < acc) return i;
  }
  return trajectories.size() - 1;
}

namespace {

std::vector<Action> actions_below(const EvaluatorRegistry& registry,
                                  const std::vector<bool>& used_dims,
                                  bool at_max_depth) {
  std::vector<Action> actions;
  if (at_max_depth) return actions;
  for (std::size_t i = 0; i < registry.size(); ++i) {
    if (!used_dims[i]) actions.push_back(Action::subtask(static_cast<int>(i)));
  }
  actions.push_back(Action::null_action());
  return actions;
}

}  // namespace

MctsJudge::MctsJudge(const JudgeTask& task, const SearchConfig& cfg,
                     const EvaluatorRegistry& registry, LlmBackend& llm,
                     RewardStrategy& reward)
    : task_(task),
      cfg_(cfg),
      registry_(registry),
      llm_(llm),
      reward_(reward),
      rng_(cfg.rng_seed),
      reward_rng_(Rng(cfg.rng_seed).fork(0x726577617264ull)) {  // "reward"
  if (!cfg_.valid()) {
    throw std::invalid_argument(
        "invalid search configuration (max_depth=" +
        std::to_string(cfg_.max_depth) + ", rollouts=" +
        std::to_string(cfg_.rollouts) + ", alpha=" + std::to_string(cfg_.alpha) +
        ", w_u=" + std::to_string(cfg_.w_u) + ", w_l=" +
        std::to_string(cfg_.w_l) + "); w_u + w_l must equal 1");
  }
  if (registry_.size() == 0) {
    throw std::invalid_argument("empty evaluator registry");
  }
  root_ = std::make_unique<SearchNode>();
  root_->is_root = true;
  root_->untried = actions_below(registry_, std::vector<bool>(registry_.size(), false),
                                 cfg_.max_depth == 0);
}

std::vector<SubtaskOutcome> MctsJudge::history_of(
    const SearchNode& node) const {
  std::vector<SubtaskOutcome> history;
  for (const SearchNode* cur = &node; cur != nullptr; cur = cur->parent) {
    if (cur->outcome) history.push_back(*cur->outcome);
  }
  std::reverse(history.begin(), history.end());
  return history;
}

SearchNode* MctsJudge::uct_pick(SearchNode& node) const {
  SearchNode* best = nullptr;
  double best_value = -std::numeric_limits<double>::infinity();
  for (const auto& child : node.children) {
    const double value = uct_value(*child, cfg_.alpha);
    if (value > best_value) {  // strict: ties go to the lowest child index
      best_value = value;
      best = child.get();
    }
  }
  if (best == nullptr) {
    throw std::logic_error("uct_pick: node has no children");
  }
  return best;
}

SearchNode* MctsJudge::pick_child(SearchNode& node) {
  if (cfg_.w_l > 0.0 && rng_.uniform01() < cfg_.w_l) {
    const auto history = history_of(node);
    std::vector<SearchNode*> endorsed;
    for (const auto& child : node.children) {
      if (child->action.is_null()) continue;  // null carries no evaluator
      if (self_assess(task_, registry_, child->action, history, llm_) ==
          AssessDecision::kInclude) {
        endorsed.push_back(child.get());
      }
    }
    if (!endorsed.empty()) {
      return endorsed[rng_.uniform_index(endorsed.size())];
    }
    // No endorsement; fall back to the UCT pick.
  }
  return uct_pick(node);
}

SearchNode* MctsJudge::descend() {
  SearchNode* node = root_.get();
  while (node->untried.empty() && node->depth < cfg_.max_depth) {
    node = pick_child(*node);
  }
  return node;
}

void MctsJudge::do_rollout() {
  // --- Selection (reads the tree; may consult the LLM) -------------------
  SearchNode* start = descend();

  // --- Expansion + simulation, staged off-tree ---------------------------
  // All LLM work happens on this pending chain; the tree is only mutated at
  // commit time, so an aborted rollout leaves it untouched.
  std::vector<bool> used_dims(registry_.size(), false);
  for (const SearchNode* cur = start; cur != nullptr; cur = cur->parent) {
    if (!cur->is_root && !cur->action.is_null()) {
      used_dims[static_cast<std::size_t>(cur->action.dimension)] = true;
    }
  }
  std::vector<SubtaskOutcome> history = history_of(*start);

  std::vector<PendingStep> pending;
  int depth_cursor = start->depth;
  while (depth_cursor < cfg_.max_depth) {
    Action action;
    if (pending.empty()) {
      // Expansion: uniform draw over the node's untried actions (null
      // included).
      action = start->untried[rng_.uniform_index(start->untried.size())];
    } else {
      // Simulation: consistently non-null while fresh dimensions remain.
      std::vector<Action> fresh;
      for (std::size_t i = 0; i < registry_.size(); ++i) {
        if (!used_dims[i]) fresh.push_back(Action::subtask(static_cast<int>(i)));
      }
      action = fresh.empty() ? Action::null_action()
                             : fresh[rng_.uniform_index(fresh.size())];
    }

    PendingStep step;
    step.action = action;
    if (!action.is_null()) {
      step.outcome = execute_subtask(task_, registry_, action, history, llm_);
      history.push_back(*step.outcome);
      used_dims[static_cast<std::size_t>(action.dimension)] = true;
    }
    pending.push_back(std::move(step));
    ++depth_cursor;
  }

  // --- Leaf evaluation ----------------------------------------------------
  // Revisited leaves reuse their stored trajectory; fresh leaves get a new
  // global evaluation.
  const bool revisit = pending.empty() && start->trajectory_index.has_value();
  Trajectory trajectory;
  if (revisit) {
    trajectory = trajectories_[*start->trajectory_index];
  } else {
    for (const SearchNode* cur = start; cur != nullptr && !cur->is_root;
         cur = cur->parent) {
      trajectory.steps.insert(trajectory.steps.begin(),
                              TrajectoryStep{cur->action, cur->outcome});
    }
    for (const auto& step : pending) {
      trajectory.steps.push_back(TrajectoryStep{step.action, step.outcome});
    }
    trajectory.global_eval = global_evaluate(task_, llm_);
    trajectory.prediction =
        majority_prediction(trajectory.steps, trajectory.global_eval);
  }

  // --- Terminal reward (may consult the LLM) ------------------------------
  const double reward = reward_.terminal(task_, trajectory, llm_, reward_rng_);

  // --- Commit: attach the pending chain ------------------------------------
  SearchNode* leaf = start;
  for (auto& step : pending) {
    auto it = std::find(leaf->untried.begin(), leaf->untried.end(), step.action);
    if (it != leaf->untried.end()) leaf->untried.erase(it);

    auto child = std::make_unique<SearchNode>();
    child->action = step.action;
    child->outcome = std::move(step.outcome);
    child->depth = leaf->depth + 1;
    child->parent = leaf;

    std::vector<bool> on_path(registry_.size(), false);
    for (const SearchNode* cur = child.get(); cur != nullptr;
         cur = cur->parent) {
      if (!cur->is_root && !cur->action.is_null()) {
        on_path[static_cast<std::size_t>(cur->action.dimension)] = true;
      }
    }
    child->untried = actions_below(registry_, on_path,
                                   child->depth >= cfg_.max_depth);

    leaf->children.push_back(std::move(child));
    leaf = leaf->children.back().get();
  }

  std::size_t trajectory_index;
  if (revisit) {
    trajectory_index = *leaf->trajectory_index;
  } else {
    trajectory.node_path.clear();
    for (SearchNode* cur = leaf; cur != nullptr && !cur->is_root;
         cur = cur->parent) {
      trajectory.node_path.insert(trajectory.node_path.begin(), cur);
    }
    trajectory_index = trajectories_.size();
    trajectories_.push_back(std::move(trajectory));
    leaf->trajectory_index = trajectory_index;
  }

  // --- Backpropagation -----------------------------------------------------
  for (SearchNode* cur = leaf; cur != nullptr; cur = cur->parent) {
    cur->q += reward;
    cur->n += 1;
  }
  trajectories_[trajectory_index].cumulative_reward = leaf->q;
}

JudgeResult MctsJudge::run() {
  reward_.prepare(task_, llm_, reward_rng_);

  int completed = 0;
  int aborted = 0;
  for (int i = 0; i < cfg_.rollouts; ++i) {
    bool ok = false;
    for (int attempt = 0; attempt < 2 && !ok; ++attempt) {
      try {
        do_rollout();
        ok = true;
      } catch (const TransportError& e) {
        logging::warn("task " + task_.task_id + ": rollout " +
                      std::to_string(i) + " aborted: " + e.what());
      } catch (const DegenerateResponseError& e) {
        logging::warn("task " + task_.task_id + ": rollout " +
                      std::to_string(i) + " aborted: " + e.what());
      }
    }
    if (ok) {
      ++completed;
    } else {
      ++aborted;
    }
  }

  if (completed == 0 || trajectories_.empty()) {
    throw std::runtime_error("task " + task_.task_id +
                             ": all rollouts failed");
  }

  JudgeResult result;
  result.trajectories = trajectories_;
  result.chosen_index = select_final(result.trajectories, rng_);
  result.final_prediction = result.trajectories[result.chosen_index].prediction;
  result.h_value = reward_.h_value();
  result.token_totals = llm_.trace().totals();
  result.completed_rollouts = completed;
  result.aborted_rollouts = aborted;
  result.tree = std::move(root_);
  result.trace = &llm_.trace();
  return result;
}

JudgeResult run_judge(const JudgeTask& task, const SearchConfig& cfg,
                      const EvaluatorRegistry& registry, LlmBackend& llm,
                      RewardStrategy& reward) {
  MctsJudge engine(task, cfg, registry, llm, reward);
  return engine.run();
}

}  // namespace treejudge
