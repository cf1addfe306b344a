#pragma once

// Ground-truth linear SEM with soft interventions.
//
// Edge weights follow the (i, j) = "i -> j" convention, so column j of a
// weight matrix holds the incoming edges of node j. A soft intervention on
// node j swaps column j of the observational matrix for column j of the
// interventional one.

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "cbandit/rng.hpp"

namespace cbandit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Largest N for which 2^N masks are enumerated.
inline constexpr int kEnumerationCap = 14;

class Intervention {
 public:
  Intervention() = default;
  explicit Intervention(int n) : mask_(static_cast<std::size_t>(n), 0) {}
  explicit Intervention(std::vector<std::uint8_t> mask);

  // Bit i of `code` selects node i.
  static Intervention from_code(std::uint64_t code, int n);
  static Intervention all(int n, bool intervened);

  int size() const { return static_cast<int>(mask_.size()); }
  bool operator[](int i) const { return mask_[static_cast<std::size_t>(i)] != 0; }
  void set(int i, bool on) { mask_[static_cast<std::size_t>(i)] = on ? 1 : 0; }
  int mode(int i) const { return mask_[static_cast<std::size_t>(i)]; }
  std::uint64_t code() const;
  const std::vector<std::uint8_t>& mask() const { return mask_; }

  friend bool operator==(const Intervention&, const Intervention&) = default;

 private:
  std::vector<std::uint8_t> mask_;
};

class CausalBandit {
 public:
  CausalBandit(Matrix b_obs, Matrix b_int, Vector noise_mean, Vector noise_var);

  int n() const { return static_cast<int>(b_obs_.rows()); }
  int reward_node() const { return n() - 1; }
  const Matrix& b_obs() const { return b_obs_; }
  const Matrix& b_int() const { return b_int_; }
  const Vector& noise_mean() const { return noise_mean_; }
  const Vector& noise_var() const { return noise_var_; }

  // Column j of the matrix for mode 0 (observational) or 1 (interventional).
  const Matrix& mode_matrix(int mode) const { return mode == 0 ? b_obs_ : b_int_; }

  nlohmann::json to_json() const;
  static CausalBandit from_json(const nlohmann::json& j);

 private:
  Matrix b_obs_;
  Matrix b_int_;
  Vector noise_mean_;
  Vector noise_var_;
};

bool is_acyclic(const Matrix& weights);

Matrix compose_post_intervention(const Matrix& b_obs, const Matrix& b_int, const Intervention& a);
Matrix compose_post_intervention(const CausalBandit& bandit, const Intervention& a);

// (I - B_a)^{-1}; throws SingularMatrix.
Matrix flow_matrix(const Matrix& b_a);

// Draws eps ~ N(nu, diag(sigma^2)) and returns x = C_a^T eps.
Vector sample(const CausalBandit& bandit, const Intervention& a, Rng& rng);
// Same transform for a pre-drawn exogenous vector.
Vector propagate(const CausalBandit& bandit, const Intervention& a, const Vector& eps);
Vector draw_exogenous(const CausalBandit& bandit, Rng& rng);

// mu_a = (I - B_a)^{-T} nu.
Vector expected_values(const CausalBandit& bandit, const Intervention& a);
Vector expected_values(const Matrix& b_a, const Vector& noise_mean);

// Exhaustive argmax of the reward mean; ties go to the lowest mask code.
std::pair<Intervention, double> optimal_intervention(const CausalBandit& bandit);

double regret_step(const CausalBandit& bandit, const Intervention& a);

// [mu_a]_N for every mask code; index = Intervention::code().
std::vector<double> reward_means(const CausalBandit& bandit);

struct Observation {
  int step = 0;
  Intervention action;
  Vector values;
  double reward = 0.0;  // values[N-1]
};

class ObservationLog {
 public:
  void append(int step, Intervention action, Vector values);
  const std::vector<Observation>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Observation& operator[](std::size_t i) const { return entries_[i]; }

 private:
  std::vector<Observation> entries_;
};

struct GeneratorOptions {
  double edge_prob = 0.5;
  double weight_lo = -2.0;
  double weight_hi = 2.0;
  double noise_mean = 1.0;
  double noise_var = 1.0;
};

// Draws one topological order (reward node last) and fills both matrices
// with edges that respect it, so every composed B_a is acyclic.
CausalBandit generate_bandit(int n, const GeneratorOptions& opts, Rng& rng);

// A topological order consistent with both matrices.
std::vector<int> shared_topological_order(const CausalBandit& bandit);

// Redraws each node's (B column, B' column) pair with probability p_change,
// keeping a shared topological order. Returns the regenerated node set.
std::pair<CausalBandit, std::vector<int>> regenerate_mechanisms(const CausalBandit& bandit,
                                                                double p_change,
                                                                const GeneratorOptions& opts,
                                                                Rng& rng);

}  // namespace cbandit
