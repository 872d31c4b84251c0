#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "support.hpp"
#include "treejudge/cli.hpp"
#include "treejudge/harness.hpp"
#include "treejudge/trace_io.hpp"

using namespace treejudge;
using namespace treejudge::testing;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("treejudge_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& leaf) const {
    return (path / leaf).string();
  }
};

struct CliRun {
  int exit_code;
  std::string out;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream captured;
  auto* old = std::cout.rdbuf(captured.rdbuf());
  int code = run_cli(args);
  std::cout.rdbuf(old);
  return {code, captured.str()};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string mock_script_json(double p) {
  json doc;
  doc["default_response"] = "Yes";
  doc["rules"] = json::array();
  auto bern_rule = [](const std::string& tag, const std::string& pattern,
                      double prob, const std::string& ok,
                      const std::string& bad) {
    return json{{"call_tag", tag},
                {"pattern", pattern},
                {"bernoulli", {{"p", prob}, {"success", ok}, {"failure", bad}}}};
  };
  auto fixed_rule = [](const std::string& tag, const std::string& pattern,
                       const std::string& response) {
    return json{{"call_tag", tag},
                {"pattern", pattern},
                {"responses", json::array({response})}};
  };
  doc["rules"].push_back(bern_rule("subtask", "[oracle:yes]", p,
                                   "Conclusion: the code is correct.",
                                   "Conclusion: the code is incorrect."));
  doc["rules"].push_back(bern_rule("subtask", "[oracle:no]", p,
                                   "Conclusion: the code is incorrect.",
                                   "Conclusion: the code is correct."));
  doc["rules"].push_back(fixed_rule("summarize", "incorrect", "No"));
  doc["rules"].push_back(fixed_rule("summarize", "correct", "Yes"));
  doc["rules"].push_back(bern_rule("global_eval", "[oracle:yes]", p, "Yes",
                                   "No"));
  doc["rules"].push_back(bern_rule("global_eval", "[oracle:no]", p, "No",
                                   "Yes"));
  doc["rules"].push_back(fixed_rule("gen_cases", "", canned_case_text()));
  doc["rules"].push_back(fixed_rule("reformat", "", canned_case_json()));
  doc["rules"].push_back(fixed_rule("validate", "", "PASS"));
  doc["rules"].push_back(
      fixed_rule("simulate_exec", "", "Simulated final output."));
  doc["rules"].push_back(bern_rule("compare_output", "[oracle:yes]", p,
                                   "**MATCH**", "**NOT MATCH**"));
  doc["rules"].push_back(bern_rule("compare_output", "[oracle:no]", p,
                                   "**NOT MATCH**", "**MATCH**"));
  return doc.dump(2);
}

std::string dataset_jsonl(int count, uint64_t seed) {
  std::ostringstream out;
  for (const auto& r : synthetic_records(count, 0.5, seed)) {
    json row;
    row["task_id"] = r.task_id;
    row["problem_statement"] = r.problem_statement;
    row["candidate_code"] = r.candidate_code;
    row["language"] = r.language;
    row["ground_truth_label"] =
        r.ground_truth_label == Verdict::kYes ? "Yes" : "No";
    out << row.dump() << "\n";
  }
  return out.str();
}

}  // namespace

TEST_CASE("cli: judge prints the verdict and exits zero") {
  TempDir dir("judge");
  write_file(dir / "mock.json", mock_script_json(1.0));
  json record;
  record["task_id"] = "single";
  record["problem_statement"] = "Sum a list. [oracle:yes]";
  record["candidate_code"] = "def solve(xs):\n    return sum(xs)  # [oracle:yes]";
  record["language"] = "Python";
  record["reference_code"] = "def solve(xs):\n    return sum(xs)";
  write_file(dir / "task.json", record.dump());

  auto result = run({"judge", "--task", dir / "task.json", "--mock",
                     dir / "mock.json", "--run-dir", dir / "run", "--seed",
                     "3", "--depth", "3", "--rollouts", "2"});
  CHECK(result.exit_code == 0);
  CHECK(result.out.rfind("Yes\n", 0) == 0);
  CHECK(result.out.find("h: correct") != std::string::npos);

  // The effective config snapshot lands in the run directory.
  CHECK(fs::exists(fs::path(dir / "run") / "config.json"));
  json config = read_json_file((fs::path(dir / "run") / "config.json").string());
  CHECK(config["search"]["max_depth"] == 3);
  CHECK(config["search"]["rollouts"] == 2);
}

TEST_CASE("cli: --no-reference binds the sentinel in every prompt") {
  TempDir dir("noref");
  write_file(dir / "mock.json", mock_script_json(1.0));
  json record;
  record["task_id"] = "single";
  record["problem_statement"] = "Sum a list. [oracle:yes]";
  record["candidate_code"] = "code [oracle:yes]";
  record["reference_code"] = "SECRET_REFERENCE_CODE";
  write_file(dir / "task.json", record.dump());

  auto result = run({"judge", "--task", dir / "task.json", "--mock",
                     dir / "mock.json", "--run-dir", dir / "run",
                     "--no-reference", "--depth", "2", "--rollouts", "1"});
  REQUIRE(result.exit_code == 0);

  json trace = read_json_file(
      (fs::path(dir / "run") / "traces" / "single.json").string());
  bool saw_sentinel = false;
  for (const auto& e : trace["exchanges"]) {
    for (const auto& m : e["request_messages"]) {
      const auto content = m["content"].get<std::string>();
      CHECK(content.find("SECRET_REFERENCE_CODE") == std::string::npos);
      if (content.find("Reference Solution (Python):not provided") !=
          std::string::npos) {
        saw_sentinel = true;
      }
    }
  }
  CHECK(saw_sentinel);
}

TEST_CASE("cli: malformed task file exits 2") {
  TempDir dir("badtask");
  write_file(dir / "mock.json", mock_script_json(1.0));
  write_file(dir / "task.json", "this is not json\n");
  auto result = run({"judge", "--task", dir / "task.json", "--mock",
                     dir / "mock.json"});
  CHECK(result.exit_code == 2);
}

TEST_CASE("cli: usage errors exit 1") {
  CHECK(run({"judge"}).exit_code == 1);            // missing --task
  CHECK(run({"frobnicate"}).exit_code == 1);       // unknown subcommand
  CHECK(run({}).exit_code == 1);                   // no subcommand
  CHECK(run({"--help"}).exit_code == 0);
}

TEST_CASE("cli: http backend without the API key env names the variable") {
  TempDir dir("nokey");
  write_file(dir / "task.json",
             json{{"task_id", "t"},
                  {"problem_statement", "p"},
                  {"candidate_code", "c"}}
                 .dump());
  unsetenv("TREEJUDGE_TEST_KEY");
  auto result = run({"judge", "--task", dir / "task.json", "--backend-url",
                     "http://127.0.0.1:1/v1", "--model", "m", "--api-key-env",
                     "TREEJUDGE_TEST_KEY"});
  CHECK(result.exit_code == 1);
}

TEST_CASE("cli: gen-tests writes one store per executable task") {
  TempDir dir("gentests");
  write_file(dir / "mock.json", mock_script_json(1.0));
  std::string data = dataset_jsonl(2, 31);
  data += json{{"task_id", "discussion_task"},
               {"problem_statement", "Draw a plot. [oracle:yes]"},
               {"candidate_code", "plot()"},
               {"mode", "discussion"}}
              .dump() +
          "\n";
  write_file(dir / "data.jsonl", data);

  auto result = run({"gen-tests", "--dataset", dir / "data.jsonl", "--out",
                     dir / "cases", "--mock", dir / "mock.json"});
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("skipped (discussion mode)") != std::string::npos);
  CHECK(fs::exists(fs::path(dir / "cases") / "synthetic_0.cases.json"));
  CHECK(fs::exists(fs::path(dir / "cases") / "synthetic_1.cases.json"));
  CHECK_FALSE(
      fs::exists(fs::path(dir / "cases") / "discussion_task.cases.json"));

  auto store = TestCaseStore::load(
      (fs::path(dir / "cases") / "synthetic_0.cases.json").string());
  CHECK(store.stored_indices().size() == 5);
}

TEST_CASE("cli: gen-tests without stored cases needs --allow-fallback") {
  TempDir dir("genfail");
  json script = json::parse(mock_script_json(1.0));
  for (auto& rule : script["rules"]) {
    if (rule["call_tag"] == "validate") rule["responses"] = {"FAIL"};
  }
  write_file(dir / "mock.json", script.dump());
  write_file(dir / "data.jsonl", dataset_jsonl(1, 7));

  auto strict = run({"gen-tests", "--dataset", dir / "data.jsonl", "--out",
                     dir / "cases", "--mock", dir / "mock.json"});
  CHECK(strict.exit_code == 2);

  auto relaxed = run({"gen-tests", "--dataset", dir / "data.jsonl", "--out",
                      dir / "cases", "--mock", dir / "mock.json",
                      "--allow-fallback"});
  CHECK(relaxed.exit_code == 0);
}

TEST_CASE("cli: bench writes reports and respects the run-dir guard") {
  TempDir dir("bench");
  write_file(dir / "mock.json", mock_script_json(1.0));
  write_file(dir / "data.jsonl", dataset_jsonl(3, 17));

  auto result =
      run({"bench", "--dataset", dir / "data.jsonl", "--mock",
           dir / "mock.json", "--run-dir", dir / "run", "--formats",
           "json,csv,markdown", "--depth", "3", "--rollouts", "2"});
  REQUIRE(result.exit_code == 0);
  CHECK(fs::exists(fs::path(dir / "run") / "report.json"));
  CHECK(fs::exists(fs::path(dir / "run") / "report.csv"));
  CHECK(fs::exists(fs::path(dir / "run") / "report.md"));
  std::ifstream md((fs::path(dir / "run") / "report.md").string());
  std::stringstream md_text;
  md_text << md.rdbuf();
  CHECK(md_text.str().find("Accuracy: 100.00%") != std::string::npos);

  // Rerunning against the same populated run directory refuses...
  auto refused =
      run({"bench", "--dataset", dir / "data.jsonl", "--mock",
           dir / "mock.json", "--run-dir", dir / "run", "--depth", "3",
           "--rollouts", "2"});
  CHECK(refused.exit_code == 1);

  // ...unless the rerun resumes from the existing traces.
  auto resumed =
      run({"bench", "--dataset", dir / "data.jsonl", "--mock",
           dir / "mock.json", "--run-dir", dir / "run", "--resume", "--depth",
           "3", "--rollouts", "2"});
  CHECK(resumed.exit_code == 0);

  json first = read_json_file((fs::path(dir / "run") / "report.json").string());
  first.erase("wall_time_seconds");
  auto second_report =
      RunReport::from_json(read_json_file(
          (fs::path(dir / "run") / "report.json").string()));
  CHECK(second_report.judged == 3);
}

TEST_CASE("cli: config file layering sits between defaults and flags") {
  TempDir dir("layering");
  write_file(dir / "mock.json", mock_script_json(1.0));
  write_file(dir / "data.jsonl", dataset_jsonl(1, 3));
  write_file(dir / "config.json",
             json{{"search", {{"max_depth", 4}, {"rollouts", 5}}},
                  {"reward", {{"delta", 3}}}}
                 .dump());

  auto result = run({"bench", "--dataset", dir / "data.jsonl", "--mock",
                     dir / "mock.json", "--run-dir", dir / "run", "--config",
                     dir / "config.json", "--rollouts", "2"});
  REQUIRE(result.exit_code == 0);
  json config = read_json_file((fs::path(dir / "run") / "config.json").string());
  CHECK(config["search"]["max_depth"] == 4);   // from the file
  CHECK(config["search"]["rollouts"] == 2);    // flag wins over the file
  CHECK(config["reward"]["delta"] == 3);       // from the file
  CHECK(config["reward"]["beta"] == 5);        // untouched default
}

TEST_CASE("cli: ablate vanilla issues one call per task") {
  TempDir dir("ablate");
  write_file(dir / "mock.json", mock_script_json(1.0));
  write_file(dir / "data.jsonl", dataset_jsonl(3, 23));

  auto result = run({"ablate", "--dataset", dir / "data.jsonl", "--mode",
                     "vanilla", "--mock", dir / "mock.json", "--run-dir",
                     dir / "run"});
  REQUIRE(result.exit_code == 0);
  for (int i = 0; i < 3; ++i) {
    json trace = read_json_file((fs::path(dir / "run") / "traces" /
                                 ("synthetic_" + std::to_string(i) + ".json"))
                                    .string());
    CHECK(trace["exchanges"].size() == 1);
  }
}

TEST_CASE("cli: sweep emits a two-row table for two rollout settings") {
  TempDir dir("sweep");
  write_file(dir / "mock.json", mock_script_json(1.0));
  write_file(dir / "data.jsonl", dataset_jsonl(2, 29));

  auto result = run({"sweep", "--dataset", dir / "data.jsonl", "--mock",
                     dir / "mock.json", "--run-dir", dir / "run",
                     "--sweep-rollouts", "2,4", "--depth", "3"});
  REQUIRE(result.exit_code == 0);
  CHECK(fs::exists(fs::path(dir / "run") / "sweep.md"));
  CHECK(fs::exists(fs::path(dir / "run") / "sweep.csv"));
  std::ifstream csv((fs::path(dir / "run") / "sweep.csv").string());
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 3);  // header + 2 cells
  CHECK(result.out.find("| 2 | 3 |") != std::string::npos);
  CHECK(result.out.find("| 4 | 3 |") != std::string::npos);
}

TEST_CASE("cli: report reformatter converts json to markdown and csv") {
  TempDir dir("report");
  write_file(dir / "mock.json", mock_script_json(1.0));
  write_file(dir / "data.jsonl", dataset_jsonl(2, 41));
  auto bench = run({"bench", "--dataset", dir / "data.jsonl", "--mock",
                    dir / "mock.json", "--run-dir", dir / "run", "--depth",
                    "2", "--rollouts", "1"});
  REQUIRE(bench.exit_code == 0);

  auto md = run({"report", "--input",
                 (fs::path(dir / "run") / "report.json").string(), "--format",
                 "markdown"});
  CHECK(md.exit_code == 0);
  CHECK(md.out.find("# Run Report") != std::string::npos);

  auto csv = run({"report", "--input",
                  (fs::path(dir / "run") / "report.json").string(),
                  "--format", "csv", "--out", dir / "report.csv"});
  CHECK(csv.exit_code == 0);
  CHECK(fs::exists(dir / "report.csv"));
}

TEST_CASE("cli: a custom evaluator registry drives the subtasks") {
  TempDir dir("registry");
  write_file(dir / "mock.json", mock_script_json(1.0));
  write_file(dir / "registry.json",
             json{{"evaluators",
                   json::array(
                       {json{{"dimension_id", "only_dim"},
                             {"display_name", "Only Dimension"},
                             {"task", "check the single custom aspect"},
                             {"steps", "1. look. 2. think. 3. conclude."}}})}}
                 .dump());
  json record;
  record["task_id"] = "single";
  record["problem_statement"] = "Sum a list. [oracle:yes]";
  record["candidate_code"] = "code [oracle:yes]";
  write_file(dir / "task.json", record.dump());

  auto result = run({"judge", "--task", dir / "task.json", "--mock",
                     dir / "mock.json", "--registry", dir / "registry.json",
                     "--run-dir", dir / "run", "--depth", "2", "--rollouts",
                     "2"});
  REQUIRE(result.exit_code == 0);
  json trace = read_json_file(
      (fs::path(dir / "run") / "traces" / "single.json").string());
  bool saw_custom_task = false;
  for (const auto& e : trace["exchanges"]) {
    if (e["call_tag"] != "subtask") continue;
    for (const auto& m : e["request_messages"]) {
      if (m["content"].get<std::string>().find(
              "check the single custom aspect") != std::string::npos) {
        saw_custom_task = true;
      }
    }
  }
  CHECK(saw_custom_task);
}

TEST_CASE("cli: bench with pre-generated cases skips generation calls") {
  TempDir dir("precases");
  write_file(dir / "mock.json", mock_script_json(1.0));
  write_file(dir / "data.jsonl", dataset_jsonl(1, 53));

  auto gen = run({"gen-tests", "--dataset", dir / "data.jsonl", "--out",
                  dir / "cases", "--mock", dir / "mock.json"});
  REQUIRE(gen.exit_code == 0);

  auto bench = run({"bench", "--dataset", dir / "data.jsonl", "--mock",
                    dir / "mock.json", "--run-dir", dir / "run", "--cases",
                    dir / "cases", "--depth", "2", "--rollouts", "1"});
  REQUIRE(bench.exit_code == 0);
  json trace = read_json_file(
      (fs::path(dir / "run") / "traces" / "synthetic_0.json").string());
  for (const auto& e : trace["exchanges"]) {
    CHECK(e["call_tag"] != "gen_cases");
    CHECK(e["call_tag"] != "reformat");
    CHECK(e["call_tag"] != "validate");
  }
}
