#include "cbandit/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/SVD>

#include "cbandit/errors.hpp"

namespace cbandit {

UcbConfig UcbConfig::defaults(int n) {
  UcbConfig cfg;
  cfg.t_explore = 4 * n;
  return cfg;
}

void UcbConfig::validate() const {
  if (t_explore < 0) throw ConfigInvalid("t_explore must be non-negative");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigInvalid("delta must lie in (0, 1)");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigInvalid("alpha must be finite and non-negative");
  if (update_period < 1) throw ConfigInvalid("update_period must be at least 1");
  if (!(lambda_prior > 0.0) || !std::isfinite(lambda_prior)) throw ConfigInvalid("lambda_prior must be positive");
}

double uncertainty_bound_formula(int n, double flow_norm, double mean_norm, double lambda_sum,
                                 double delta) {
  const double nn = static_cast<double>(n);
  return 2.0 * std::pow(nn * nn + 2.0 * nn, 0.25) * flow_norm * mean_norm *
         std::sqrt(std::log(2.0 * nn / delta) * lambda_sum);
}

double lambda_sum(const EstimatedModel& model, const Intervention& a, double lambda_prior) {
  double sum = 0.0;
  for (int i = 0; i < model.n; ++i) {
    const SubgraphEstimate* sg = model.subgraph(a.mode(i), i);
    sum += sg ? sg->weight_cov_lambda_max() : lambda_prior;
  }
  return sum;
}

namespace {

struct ArmPieces {
  double mean = 0.0;
  double flow_norm = 0.0;
  double mean_norm = 0.0;
};

ArmPieces arm_pieces(const EstimatedModel& model, const Intervention& a) {
  const Matrix b_a = model.composed(a);
  const Matrix c = flow_matrix(b_a);
  const Vector mu = c.transpose() * model.noise_mean;
  // [mu_hat]_N = (C e_N)^T nu, so the reward error picks up column N of C.
  return {mu(model.n - 1), c.col(model.n - 1).norm(), mu.norm()};
}

}  // namespace

double uncertainty_bound(const EstimatedModel& model, const Intervention& a, double delta,
                         double lambda_prior) {
  const ArmPieces p = arm_pieces(model, a);
  return uncertainty_bound_formula(model.n, p.flow_norm, p.mean_norm, lambda_sum(model, a, lambda_prior),
                                   delta);
}

ArmScore score_arm(const EstimatedModel& model, const Intervention& a, const UcbConfig& cfg) {
  ArmScore s{a};
  if (!is_acyclic(model.composed(a))) {
    s.eligible = false;
    return s;
  }
  try {
    const ArmPieces p = arm_pieces(model, a);
    s.mean = p.mean;
    s.bound = uncertainty_bound_formula(model.n, p.flow_norm, p.mean_norm,
                                        lambda_sum(model, a, cfg.lambda_prior), cfg.delta);
    s.score = s.mean + cfg.alpha * s.bound;
    s.eligible = std::isfinite(s.score);
  } catch (const SingularMatrix&) {
    s.eligible = false;
  }
  return s;
}

std::vector<ArmScore> score_arms(const EstimatedModel& model, const UcbConfig& cfg) {
  std::vector<ArmScore> out;
  const std::uint64_t count = std::uint64_t{1} << model.n;
  for (std::uint64_t c = 0; c < count; ++c) out.push_back(score_arm(model, Intervention::from_code(c, model.n), cfg));
  return out;
}

std::optional<std::size_t> best_arm(std::span<const ArmScore> arms) {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < arms.size(); ++k) {
    if (!arms[k].eligible) continue;
    if (!best || arms[k].score > arms[*best].score ||
        (arms[k].score == arms[*best].score && arms[k].a.code() < arms[*best].a.code())) {
      best = k;
    }
  }
  return best;
}

namespace {

Intervention random_arm(int n, Rng& rng) {
  std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << n) - 1);
  return Intervention::from_code(pick(rng), n);
}

}  // namespace

Intervention select_intervention(const EstimatedModel& model, const UcbConfig& cfg, int t, Rng& rng) {
  if (t <= cfg.t_explore) return random_arm(model.n, rng);
  const auto arms = score_arms(model, cfg);
  const auto best = best_arm(arms);
  return best ? arms[*best].a : random_arm(model.n, rng);
}

double RunResult::cumulative_regret() const {
  double sum = 0.0;
  for (const auto& s : steps) sum += s.regret;
  return sum;
}

namespace {

StepRecord record_step(const Environment& env, const Observation& obs, double bound) {
  StepRecord r;
  r.step = obs.step;
  r.arm = obs.action.code();
  r.reward = obs.reward;
  const double best = env.optimal_value(obs.step);
  r.regret = best - env.arm_mean(obs.step, r.arm);
  r.optimal = r.regret <= 1e-12 * (1.0 + std::abs(best));
  r.bound = bound;
  return r;
}

const Observation& observe(const Environment& env, int step, const Intervention& a, Rng& noise,
                           ObservationLog& log) {
  const CausalBandit& bandit = env.bandit_at(step);
  const Vector eps = draw_exogenous(bandit, noise);
  log.append(step, a, propagate(bandit, a, eps));
  return log[log.size() - 1];
}

void check_horizon(int horizon) {
  if (horizon < 1) throw ConfigInvalid("horizon must be positive");
}

}  // namespace

RunResult run_csl_ucb(const Environment& env, const UcbConfig& cfg, const CslConfig& csl, int horizon,
                      std::uint64_t seed, LoopObserver* observer) {
  cfg.validate();
  check_horizon(horizon);
  const int n = env.n();
  if (n > kEnumerationCap) throw TooLarge("arm enumeration limited to N <= 14");
  Rng noise = make_rng(seed, 0, Stream::noise);
  Rng policy = make_rng(seed, 0, Stream::policy);
  const Vector& nu = env.segment(0).noise_mean();

  RunResult out;
  EstimatedModel model = EstimatedModel::empty(n, nu);
  ModeSampleWindow windows;
  for (auto& w : windows.start) w.assign(static_cast<std::size_t>(n), 0);
  std::vector<ArmScore> arms;
  std::optional<std::size_t> best;

  for (int t = 1; t <= horizon; ++t) {
    Intervention a(n);
    double bound = 0.0;
    if (t <= cfg.t_explore) {
      a = random_arm(n, policy);
    } else {
      if ((t - cfg.t_explore - 1) % cfg.update_period == 0) {
        if (observer) observer->before_refit(t, model, windows, out.changes);
        model = learn_both_modes(out.log, windows, nu, csl, &model);
        if (observer) observer->after_refit(out.log, model);
        arms = score_arms(model, cfg);
        best = best_arm(arms);
      }
      if (best) {
        a = arms[*best].a;
        bound = arms[*best].bound;
      } else {
        a = random_arm(n, policy);
      }
    }
    const Observation& obs = observe(env, t, a, noise, out.log);
    if (observer) observer->on_observation(obs, model);
    out.steps.push_back(record_step(env, obs, bound));
  }
  out.model = std::move(model);
  return out;
}

RunResult run_vanilla_ucb(const Environment& env, double alpha, int horizon, std::uint64_t seed) {
  check_horizon(horizon);
  const int n = env.n();
  if (n > kEnumerationCap) throw TooLarge("arm enumeration limited to N <= 14");
  Rng noise = make_rng(seed, 0, Stream::noise);
  const std::uint64_t arm_count = std::uint64_t{1} << n;
  std::vector<double> sums(arm_count, 0.0);
  std::vector<int> counts(arm_count, 0);

  RunResult out;
  for (int t = 1; t <= horizon; ++t) {
    std::uint64_t pick = arm_count;
    for (std::uint64_t c = 0; c < arm_count; ++c) {
      if (counts[c] == 0) {
        pick = c;
        break;
      }
    }
    if (pick == arm_count) {
      double best = -std::numeric_limits<double>::infinity();
      const double log_t = std::log(static_cast<double>(t));
      for (std::uint64_t c = 0; c < arm_count; ++c) {
        const double cnt = counts[c];
        const double s = sums[c] / cnt + alpha * std::sqrt(log_t / cnt);
        if (s > best) {
          best = s;
          pick = c;
        }
      }
    }
    const Observation& obs = observe(env, t, Intervention::from_code(pick, n), noise, out.log);
    sums[pick] += obs.reward;
    counts[pick] += 1;
    out.steps.push_back(record_step(env, obs, 0.0));
  }
  return out;
}

RunResult run_oracle(const Environment& env, int horizon, std::uint64_t seed, OracleKnowledge knowledge) {
  check_horizon(horizon);
  const int n = env.n();
  Rng noise = make_rng(seed, 0, Stream::noise);
  RunResult out;
  for (int t = 1; t <= horizon; ++t) {
    const std::uint64_t code =
        knowledge == OracleKnowledge::current ? env.optimal_code(t) : env.optimal_code_of_segment(0);
    const Observation& obs = observe(env, t, Intervention::from_code(code, n), noise, out.log);
    out.steps.push_back(record_step(env, obs, 0.0));
  }
  return out;
}

EstimatedModel fit_true_structure(const CausalBandit& bandit, const std::array<Matrix, 2>& samples) {
  const int n = bandit.n();
  EstimatedModel model = EstimatedModel::empty(n, bandit.noise_mean());
  for (int m = 0; m < 2; ++m) {
    const Matrix& truth = bandit.mode_matrix(m);
    std::vector<SubgraphEstimate> fits;
    for (int i = 0; i < n; ++i) {
      std::vector<int> parents;
      for (int j = 0; j < n; ++j) {
        if (truth(j, i) != 0.0) parents.push_back(j);
      }
      fits.push_back(fit_subgraph(samples[static_cast<std::size_t>(m)], i, m, parents,
                                  bandit.noise_mean()(i)));
    }
    model.b_hat[static_cast<std::size_t>(m)] = assemble_weight_matrix(fits, n);
    for (int i = 0; i < n; ++i) {
      model.subgraphs[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)] =
          std::move(fits[static_cast<std::size_t>(i)]);
      model.fallback[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)] = false;
    }
  }
  return model;
}

ConcentrationReport concentration_holds(const CausalBandit& bandit, int samples_per_mode, double delta,
                                        int trials, Rng& rng) {
  if (trials < 1) throw ConfigInvalid("trials must be positive");
  const int n = bandit.n();
  if (n > kEnumerationCap) throw TooLarge("arm enumeration limited to N <= 14");
  std::vector<Intervention> arms;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c) arms.push_back(Intervention::from_code(c, n));
  std::vector<Vector> true_mu;
  std::vector<Matrix> true_b;
  for (const auto& a : arms) {
    true_b.push_back(compose_post_intervention(bandit, a));
    true_mu.push_back(expected_values(true_b.back(), bandit.noise_mean()));
  }
  std::vector<int> bound_hits(arms.size(), 0), plugin(arms.size(), 0), sv_hits(arms.size(), 0);
  // Per (mode, node): accumulated ||dB_i||^2, ||dB_i||^3 and lambda_max.
  std::array<std::vector<std::array<double, 3>>, 2> moments;
  for (auto& v : moments) v.assign(static_cast<std::size_t>(n), {0.0, 0.0, 0.0});

  const double nn = static_cast<double>(n);
  const double sv_scale = 2.0 * std::pow(nn * nn + 2.0 * nn, 0.25);
  for (int trial = 0; trial < trials; ++trial) {
    std::array<Matrix, 2> samples;
    for (int m = 0; m < 2; ++m) {
      const Intervention a = Intervention::all(n, m == 1);
      Matrix x(n, samples_per_mode);
      for (int s = 0; s < samples_per_mode; ++s) x.col(s) = sample(bandit, a, rng);
      samples[static_cast<std::size_t>(m)] = std::move(x);
    }
    const EstimatedModel model = fit_true_structure(bandit, samples);

    for (int m = 0; m < 2; ++m) {
      const Matrix err = model.b_hat[static_cast<std::size_t>(m)] - bandit.mode_matrix(m);
      for (int i = 0; i < n; ++i) {
        const double e = err.col(i).norm();
        auto& acc = moments[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)];
        acc[0] += e * e;
        acc[1] += e * e * e;
        acc[2] += model.subgraph(m, i)->weight_cov_lambda_max();
      }
    }

    for (std::size_t k = 0; k < arms.size(); ++k) {
      const Intervention& a = arms[k];
      const Matrix b_hat = model.composed(a);
      const Matrix c_hat = flow_matrix(b_hat);
      const Vector mu_hat = c_hat.transpose() * model.noise_mean;
      const double err = std::abs(mu_hat(n - 1) - true_mu[k](n - 1));
      const double lam = lambda_sum(model, a, 10.0);
      const double flow = c_hat.col(n - 1).norm();
      if (err >= uncertainty_bound_formula(n, flow, true_mu[k].norm(), lam, delta)) ++bound_hits[k];
      if (err >= uncertainty_bound_formula(n, flow, mu_hat.norm(), lam, delta)) ++plugin[k];
      const Eigen::JacobiSVD<Matrix> svd(b_hat - true_b[k]);
      if (svd.singularValues()(0) >= sv_scale * std::sqrt(std::log(2.0 * nn / delta) * lam)) ++sv_hits[k];
    }
  }

  ConcentrationReport r;
  r.trials = trials;
  const double tr = static_cast<double>(trials);
  r.violation_rate = *std::max_element(bound_hits.begin(), bound_hits.end()) / tr;
  r.plugin_violation_rate = *std::max_element(plugin.begin(), plugin.end()) / tr;
  r.singular_value_violation_rate = *std::max_element(sv_hits.begin(), sv_hits.end()) / tr;
  for (const auto& mode : moments) {
    for (const auto& acc : mode) {
      const double lam = acc[2] / tr;
      if (lam <= 0.0) continue;  // root nodes carry no weight error
      for (int m = 2; m <= 3; ++m) {
        const double factorial = m == 2 ? 2.0 : 6.0;
        const double bound =
            factorial * std::sqrt(4.0 * nn / (nn + 2.0)) * std::pow(lam * (nn + 2.0) / 4.0, m / 2.0);
        r.moment_worst_ratio = std::max(r.moment_worst_ratio, (acc[static_cast<std::size_t>(m - 2)] / tr) / bound);
      }
    }
  }
  return r;
}

}  // namespace cbandit
