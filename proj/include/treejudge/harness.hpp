#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "treejudge/backend.hpp"
#include "treejudge/dataset.hpp"
#include "treejudge/evaluators.hpp"
#include "treejudge/reward.hpp"
#include "treejudge/search.hpp"

namespace treejudge {

// Builds the backend for one task. The harness derives the task seed as
// hash(base_seed, task_id) and hands it here, so scripted backends stay
// deterministic no matter how tasks are scheduled across workers.
using BackendFactory = std::function<std::unique_ptr<LlmBackend>(
    const DatasetRecord& record, uint64_t task_seed)>;

struct HarnessOptions {
  int parallelism = 1;
  uint64_t base_seed = 0;
  bool use_reference = true;
  std::string run_dir;   // per-task traces land in <run_dir>/traces; empty disables
  bool resume = false;   // reuse existing per-task traces instead of recomputing
  std::string cases_dir; // preload <task_id>.cases.json stores when present
};

struct TaskOutcome {
  enum class Status { kJudged, kUnjudged };

  std::string task_id;
  Status status = Status::kUnjudged;
  std::optional<Verdict> verdict;
  std::optional<Verdict> label;
  HValue h = HValue::kNotComputed;
  TokenTotals tokens;
  std::string error;  // set for unjudged tasks

  bool operator==(const TaskOutcome&) const = default;
};

struct RunReport {
  std::vector<TaskOutcome> per_task;
  std::optional<double> accuracy;  // nullopt when no labeled task was judged
  int judged = 0;
  int unjudged = 0;
  int labeled = 0;  // judged tasks carrying a label
  int correct = 0;
  double mean_completion_tokens = 0.0;
  TokenTotals token_totals;
  nlohmann::json config_snapshot;
  double wall_time_seconds = 0.0;

  nlohmann::json to_json() const;
  static RunReport from_json(const nlohmann::json& doc);

  bool operator==(const RunReport&) const = default;
};

RunReport run_benchmark(const std::vector<DatasetRecord>& records,
                        const SearchConfig& search_cfg,
                        const RewardConfig& reward_cfg,
                        const EvaluatorRegistry& registry,
                        const BackendFactory& factory,
                        const HarnessOptions& options);

// Table-7-style modes. Vanilla issues one whole-task judgment per task;
// MajorityVote executes every registry subtask once plus the global
// evaluation and takes the majority (no tree, no reward); Mcts is the full
// pipeline under the configured reward and selection settings.
enum class AblationMode { kVanilla, kMajorityVote, kMcts };

std::string_view to_string(AblationMode mode);
std::optional<AblationMode> ablation_mode_from_string(std::string_view s);

RunReport run_ablation(const std::vector<DatasetRecord>& records,
                       AblationMode mode, const SearchConfig& search_cfg,
                       const RewardConfig& reward_cfg,
                       const EvaluatorRegistry& registry,
                       const BackendFactory& factory,
                       const HarnessOptions& options);

// Scaling sweep over the test-time-compute axes. Every provided axis is
// swept as a cartesian grid; empty axes pin the base config's value. All
// cells share the same base seed so comparisons are paired per task.
struct SweepAxes {
  std::vector<int> rollouts;
  std::vector<int> max_depth;
  std::vector<int> gamma;
  std::vector<int> delta;
};

struct SweepCell {
  int rollouts = 0;
  int max_depth = 0;
  int gamma = 0;
  int delta = 0;
  RunReport report;
};

std::vector<SweepCell> run_scaling_sweep(
    const std::vector<DatasetRecord>& records, const SearchConfig& search_cfg,
    const RewardConfig& reward_cfg, const EvaluatorRegistry& registry,
    const BackendFactory& factory, const HarnessOptions& options,
    const SweepAxes& axes);

// Long-format results table, one row per grid cell.
std::string sweep_table_markdown(const std::vector<SweepCell>& cells);
std::string sweep_table_csv(const std::vector<SweepCell>& cells);

enum class ReportFormat { kJson, kCsv, kMarkdown };

std::string format_report(const RunReport& report, ReportFormat format);
void emit_report(const RunReport& report, ReportFormat format,
                 const std::string& path);

}  // namespace treejudge
