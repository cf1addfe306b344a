#pragma once

// Monte Carlo harness: config parsing, paired policy runs, per-run and
// per-step aggregation, and the on-disk result formats.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbandit/changedet.hpp"
#include "cbandit/csl.hpp"
#include "cbandit/policy.hpp"

namespace cbandit {

inline constexpr int kFormatVersion = 1;

enum class ExperimentKind { bandit, identification };

// Policy names accepted in configs and on the command line.
enum class PolicyKind { csl_ucb, csl_ucb_cd, vanilla_ucb, oracle, oracle_stale };
std::string to_string(PolicyKind p);
PolicyKind parse_policy(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::bandit;
  int n_nodes = 6;
  int horizon = 800;  // steps, or observational samples for identification
  int mc_runs = 20;
  std::uint64_t seed = 1;
  GeneratorOptions generator;
  std::vector<PolicyKind> policies{PolicyKind::csl_ucb, PolicyKind::vanilla_ucb, PolicyKind::oracle};
  CslConfig csl;
  UcbConfig ucb;  // t_explore defaults to 4N when absent from the file
  double vanilla_alpha = 2.0;
  std::vector<int> change_steps;
  double p_change = 0.3;
  DetectorConfig detector;
  int final_window = 100;
  int threads = 0;  // 0: hardware concurrency
  std::filesystem::path output = "results";

  // Unknown keys, wrong types and out-of-range values throw ConfigInvalid.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  void validate() const;
};

struct RunMetrics {
  int run = 0;
  std::string policy;
  std::optional<double> final_regret;
  std::optional<double> optimal_rate;  // over the final window
  std::optional<int> graph_fn;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> nshd;
  std::optional<int> detections;
  std::optional<int> true_changes;
  std::optional<int> detected_changes;
  std::optional<double> mean_delay;
  std::optional<int> false_alarms;
};

struct StepAggregate {
  std::string policy;
  int step = 0;
  double regret_mean = 0.0;
  double regret_std = 0.0;
  double optimal_rate = 0.0;
};

struct ExperimentResult {
  std::vector<RunMetrics> runs;       // ordered by (run, policy order)
  std::vector<StepAggregate> steps;   // ordered by (policy order, step)
};

// Environment for run `run` of an experiment, drawn from its own stream.
Environment make_environment(const ExperimentConfig& cfg, int run);

// Graph metrics of an estimate against the bandit's true matrices, pooling
// both modes when `both_modes` is set.
void fill_graph_metrics(RunMetrics& m, const CausalBandit& truth, const EstimatedModel& model,
                        bool both_modes);

// Detection rate, delays and false alarms against the environment's changes.
void fill_detection_metrics(RunMetrics& m, const Environment& env, const std::vector<ChangeEvent>& events,
                            int horizon);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Writes per_run.csv, per_step.csv, summary.json and config.json.
void write_results(const ExperimentConfig& cfg, const ExperimentResult& result,
                   const std::filesystem::path& dir);

std::string per_run_csv(const std::vector<RunMetrics>& runs);
std::vector<RunMetrics> parse_per_run_csv(const std::string& text);
std::string per_step_csv(const std::vector<StepAggregate>& steps);

// Means over runs per policy; undefined values are skipped and counted.
nlohmann::json summarize(const std::vector<RunMetrics>& runs);
std::string dump_summary(const nlohmann::json& summary);

std::string format_double(double v);

}  // namespace cbandit
