#pragma once

// Intervention selection: the reward-uncertainty bound for an estimated
// model, UCB arm scoring, the CSL-UCB loop, and two baselines (vanilla
// per-arm UCB and a known-model oracle).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cbandit/csl.hpp"
#include "cbandit/environment.hpp"
#include "cbandit/estimation.hpp"

namespace cbandit {

struct UcbConfig {
  int t_explore = 0;        // length of the random exploring start
  double delta = 0.05;      // confidence level of the bound
  double alpha = 0.01;      // exploration weight; the bound is very conservative
  int update_period = 20;   // steps between graph refits
  double lambda_prior = 10.0;  // lambda_max charged for never-fit sub-graphs

  static UcbConfig defaults(int n);
  void validate() const;
};

struct ArmScore {
  Intervention a;
  double mean = 0.0;   // estimated reward [mu_hat_a]_N
  double bound = 0.0;  // U
  double score = 0.0;  // mean + alpha * bound
  bool eligible = true;  // false when the composed estimate is cyclic or singular
};

// 2 (N^2 + 2N)^{1/4} * flow_norm * mean_norm * sqrt(ln(2N / delta) * lambda_sum).
double uncertainty_bound_formula(int n, double flow_norm, double mean_norm, double lambda_sum,
                                 double delta);

// Sum over nodes of lambda_max of each node's weight-error covariance in the
// mode selected by `a`; unfit sub-graphs contribute lambda_prior.
double lambda_sum(const EstimatedModel& model, const Intervention& a, double lambda_prior);

// U with the estimated means standing in for the true ones. Throws
// SingularMatrix when I - B_hat_a cannot be inverted.
double uncertainty_bound(const EstimatedModel& model, const Intervention& a, double delta,
                         double lambda_prior = 10.0);

ArmScore score_arm(const EstimatedModel& model, const Intervention& a, const UcbConfig& cfg);
std::vector<ArmScore> score_arms(const EstimatedModel& model, const UcbConfig& cfg);

// Index of the best eligible arm; ties go to the lowest mask code.
std::optional<std::size_t> best_arm(std::span<const ArmScore> arms);

// Uniformly random mask during the exploring start (t <= t_explore),
// otherwise the UCB argmax.
Intervention select_intervention(const EstimatedModel& model, const UcbConfig& cfg, int t, Rng& rng);

struct StepRecord {
  int step = 0;
  std::uint64_t arm = 0;
  double reward = 0.0;
  double regret = 0.0;   // expected per-step regret
  bool optimal = false;
  double bound = 0.0;    // U of the chosen arm (0 during exploration and for baselines)
};

struct ChangeEvent {
  int detected_at = 0;
  int node = 0;
  int mode = 0;
  int change_step = 0;  // estimated last pre-change step
  double psi_max = 0.0;
};

struct RunResult {
  ObservationLog log;
  std::vector<StepRecord> steps;
  std::vector<ChangeEvent> changes;
  std::optional<EstimatedModel> model;  // final estimate for CSL policies

  double cumulative_regret() const;
};

// Extension points used by the change-detection variant of the loop.
class LoopObserver {
 public:
  virtual ~LoopObserver() = default;
  virtual void on_observation(const Observation& obs, const EstimatedModel& model) = 0;
  // Runs before each refit with data up to step-1; may move window starts.
  virtual void before_refit(int step, const EstimatedModel& model, ModeSampleWindow& windows,
                            std::vector<ChangeEvent>& events) = 0;
  virtual void after_refit(const ObservationLog& log, const EstimatedModel& model) = 0;
};

// Exogenous draws and policy randomness come from separate streams derived
// from `seed`, so every policy run with one seed sees the same noise.
RunResult run_csl_ucb(const Environment& env, const UcbConfig& cfg, const CslConfig& csl, int horizon,
                      std::uint64_t seed, LoopObserver* observer = nullptr);

RunResult run_vanilla_ucb(const Environment& env, double alpha, int horizon, std::uint64_t seed);

enum class OracleKnowledge { current, initial };
RunResult run_oracle(const Environment& env, int horizon, std::uint64_t seed,
                     OracleKnowledge knowledge = OracleKnowledge::current);

struct ConcentrationReport {
  double violation_rate = 0.0;         // worst arm, bound with true ||mu_a||
  double plugin_violation_rate = 0.0;  // worst arm, bound with ||mu_hat_a||
  double singular_value_violation_rate = 0.0;  // worst arm, singular-value bound
  double moment_worst_ratio = 0.0;     // max over (node, mode, m in {2,3}) of empirical moment / bound
  int trials = 0;
};

// Fits every sub-graph on its true parent set from `samples_per_mode`
// observational and fully intervened draws, `trials` times, and measures how
// often the reward error reaches the bound.
ConcentrationReport concentration_holds(const CausalBandit& bandit, int samples_per_mode, double delta,
                                        int trials, Rng& rng);

// Fits each (mode, node) sub-graph on its true parents; test helper shared
// with the concentration harness.
EstimatedModel fit_true_structure(const CausalBandit& bandit, const std::array<Matrix, 2>& samples);

}  // namespace cbandit
