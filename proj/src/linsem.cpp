#include "cbandit/linsem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <numeric>
#include <string>

#include "cbandit/errors.hpp"

namespace cbandit {

namespace {

constexpr int kFormatVersion = 1;

nlohmann::json matrix_to_json(const Matrix& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j, int n, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ConfigInvalid(std::string(name) + ": expected " + std::to_string(n) + " rows");
  }
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw ConfigInvalid(std::string(name) + ": row " + std::to_string(i) + " has wrong length");
    }
    for (int k = 0; k < n; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
  }
  return m;
}

Vector vector_from_json(const nlohmann::json& j, int n, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ConfigInvalid(std::string(name) + ": expected length " + std::to_string(n));
  }
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

}  // namespace

Intervention::Intervention(std::vector<std::uint8_t> mask) : mask_(std::move(mask)) {
  for (auto v : mask_) {
    if (v > 1) throw std::invalid_argument("intervention entries must be 0 or 1");
  }
}

Intervention Intervention::from_code(std::uint64_t code, int n) {
  Intervention a(n);
  for (int i = 0; i < n; ++i) a.set(i, ((code >> i) & 1U) != 0);
  return a;
}

Intervention Intervention::all(int n, bool intervened) {
  Intervention a(n);
  for (int i = 0; i < n; ++i) a.set(i, intervened);
  return a;
}

std::uint64_t Intervention::code() const {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i]) c |= (std::uint64_t{1} << i);
  }
  return c;
}

CausalBandit::CausalBandit(Matrix b_obs, Matrix b_int, Vector noise_mean, Vector noise_var)
    : b_obs_(std::move(b_obs)),
      b_int_(std::move(b_int)),
      noise_mean_(std::move(noise_mean)),
      noise_var_(std::move(noise_var)) {
  const auto n = b_obs_.rows();
  if (n < 1 || b_obs_.cols() != n || b_int_.rows() != n || b_int_.cols() != n ||
      noise_mean_.size() != n || noise_var_.size() != n) {
    throw std::invalid_argument("CausalBandit: inconsistent dimensions");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (b_obs_(i, i) != 0.0 || b_int_(i, i) != 0.0) {
      throw std::invalid_argument("CausalBandit: self-loop on node " + std::to_string(i));
    }
    if (!(noise_var_(i) > 0.0)) {
      throw std::invalid_argument("CausalBandit: noise variance must be positive");
    }
  }
  if (!is_acyclic(b_obs_) || !is_acyclic(b_int_)) {
    throw std::invalid_argument("CausalBandit: weight matrices must be acyclic");
  }
}

nlohmann::json CausalBandit::to_json() const {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["n"] = n();
  j["b_obs"] = matrix_to_json(b_obs_);
  j["b_int"] = matrix_to_json(b_int_);
  j["noise_mean"] = std::vector<double>(noise_mean_.data(), noise_mean_.data() + n());
  j["noise_var"] = std::vector<double>(noise_var_.data(), noise_var_.data() + n());
  return j;
}

CausalBandit CausalBandit::from_json(const nlohmann::json& j) {
  try {
    if (j.contains("format_version") && j.at("format_version").get<int>() != kFormatVersion) {
      throw ConfigInvalid("unsupported bandit format_version");
    }
    const int n = j.at("n").get<int>();
    if (n < 1) throw ConfigInvalid("n must be positive");
    return CausalBandit(matrix_from_json(j.at("b_obs"), n, "b_obs"),
                        matrix_from_json(j.at("b_int"), n, "b_int"),
                        vector_from_json(j.at("noise_mean"), n, "noise_mean"),
                        vector_from_json(j.at("noise_var"), n, "noise_var"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("bandit fixture: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigInvalid(std::string("bandit fixture: ") + e.what());
  }
}

bool is_acyclic(const Matrix& weights) {
  const auto n = static_cast<int>(weights.rows());
  std::vector<int> indegree(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (weights(i, j) != 0.0) ++indegree[static_cast<std::size_t>(j)];
    }
  }
  std::vector<int> stack;
  for (int j = 0; j < n; ++j) {
    if (indegree[static_cast<std::size_t>(j)] == 0) stack.push_back(j);
  }
  int seen = 0;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    ++seen;
    for (int j = 0; j < n; ++j) {
      if (weights(i, j) != 0.0 && --indegree[static_cast<std::size_t>(j)] == 0) stack.push_back(j);
    }
  }
  return seen == n;
}

Matrix compose_post_intervention(const Matrix& b_obs, const Matrix& b_int, const Intervention& a) {
  Matrix b_a = b_obs;
  for (int i = 0; i < a.size(); ++i) {
    if (a[i]) b_a.col(i) = b_int.col(i);
  }
  return b_a;
}

Matrix compose_post_intervention(const CausalBandit& bandit, const Intervention& a) {
  return compose_post_intervention(bandit.b_obs(), bandit.b_int(), a);
}

Matrix flow_matrix(const Matrix& b_a) {
  const auto n = b_a.rows();
  Eigen::FullPivLU<Matrix> lu(Matrix::Identity(n, n) - b_a);
  if (!lu.isInvertible()) throw SingularMatrix("I - B_a is not invertible");
  return lu.inverse();
}

Vector draw_exogenous(const CausalBandit& bandit, Rng& rng) {
  std::normal_distribution<double> std_normal(0.0, 1.0);
  Vector eps(bandit.n());
  for (int i = 0; i < bandit.n(); ++i) {
    eps(i) = bandit.noise_mean()(i) + std::sqrt(bandit.noise_var()(i)) * std_normal(rng);
  }
  return eps;
}

Vector propagate(const CausalBandit& bandit, const Intervention& a, const Vector& eps) {
  return flow_matrix(compose_post_intervention(bandit, a)).transpose() * eps;
}

Vector sample(const CausalBandit& bandit, const Intervention& a, Rng& rng) {
  return propagate(bandit, a, draw_exogenous(bandit, rng));
}

Vector expected_values(const Matrix& b_a, const Vector& noise_mean) {
  const auto n = b_a.rows();
  Eigen::FullPivLU<Matrix> lu((Matrix::Identity(n, n) - b_a).transpose());
  if (!lu.isInvertible()) throw SingularMatrix("I - B_a is not invertible");
  return lu.solve(noise_mean);
}

Vector expected_values(const CausalBandit& bandit, const Intervention& a) {
  return expected_values(compose_post_intervention(bandit, a), bandit.noise_mean());
}

std::pair<Intervention, double> optimal_intervention(const CausalBandit& bandit) {
  const int n = bandit.n();
  if (n > kEnumerationCap) {
    throw TooLarge("optimal_intervention: N=" + std::to_string(n) + " exceeds enumeration cap");
  }
  const std::uint64_t arms = std::uint64_t{1} << n;
  std::uint64_t best_code = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t code = 0; code < arms; ++code) {
    const double r = expected_values(bandit, Intervention::from_code(code, n))(n - 1);
    if (r > best) {
      best = r;
      best_code = code;
    }
  }
  return {Intervention::from_code(best_code, n), best};
}

std::vector<double> reward_means(const CausalBandit& bandit) {
  const int n = bandit.n();
  if (n > kEnumerationCap) {
    throw TooLarge("reward_means: N=" + std::to_string(n) + " exceeds enumeration cap");
  }
  std::vector<double> means(std::size_t{1} << n);
  for (std::uint64_t code = 0; code < means.size(); ++code) {
    means[code] = expected_values(bandit, Intervention::from_code(code, n))(n - 1);
  }
  return means;
}

void ObservationLog::append(int step, Intervention action, Vector values) {
  if (!entries_.empty() && step <= entries_.back().step) {
    throw std::invalid_argument("ObservationLog: step indices must increase");
  }
  if (values.size() != action.size() || values.size() == 0) {
    throw std::invalid_argument("ObservationLog: action/value size mismatch");
  }
  const double reward = values(values.size() - 1);
  entries_.push_back(Observation{step, std::move(action), std::move(values), reward});
}

double regret_step(const CausalBandit& bandit, const Intervention& a) {
  const double best = optimal_intervention(bandit).second;
  return best - expected_values(bandit, a)(bandit.reward_node());
}

CausalBandit generate_bandit(int n, const GeneratorOptions& opts, Rng& rng) {
  if (n < 1) throw std::invalid_argument("generate_bandit: n must be positive");
  std::vector<int> order(static_cast<std::size_t>(n - 1));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  order.push_back(n - 1);

  std::bernoulli_distribution edge(opts.edge_prob);
  std::uniform_real_distribution<double> weight(opts.weight_lo, opts.weight_hi);
  Matrix b_obs = Matrix::Zero(n, n);
  Matrix b_int = Matrix::Zero(n, n);
  for (int q = 1; q < n; ++q) {
    const int child = order[static_cast<std::size_t>(q)];
    for (int p = 0; p < q; ++p) {
      const int parent = order[static_cast<std::size_t>(p)];
      if (edge(rng)) b_obs(parent, child) = weight(rng);
      if (edge(rng)) b_int(parent, child) = weight(rng);
    }
  }
  return CausalBandit(std::move(b_obs), std::move(b_int), Vector::Constant(n, opts.noise_mean),
                      Vector::Constant(n, opts.noise_var));
}

std::vector<int> shared_topological_order(const CausalBandit& bandit) {
  const int n = bandit.n();
  Matrix support = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (bandit.b_obs()(i, j) != 0.0 || bandit.b_int()(i, j) != 0.0) support(i, j) = 1.0;
    }
  }
  // Lowest-index-first Kahn: deterministic, and the reward node (highest
  // index) comes as late as the structure allows.
  std::vector<int> indegree(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) indegree[static_cast<std::size_t>(j)] += support(i, j) != 0.0;
  }
  std::vector<int> order;
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  while (static_cast<int>(order.size()) < n) {
    int pick = -1;
    for (int j = 0; j < n && pick < 0; ++j) {
      if (!done[static_cast<std::size_t>(j)] && indegree[static_cast<std::size_t>(j)] == 0) pick = j;
    }
    if (pick < 0) throw std::logic_error("shared_topological_order: union graph is cyclic");
    done[static_cast<std::size_t>(pick)] = true;
    order.push_back(pick);
    for (int j = 0; j < n; ++j) {
      if (support(pick, j) != 0.0) --indegree[static_cast<std::size_t>(j)];
    }
  }
  return order;
}

std::pair<CausalBandit, std::vector<int>> regenerate_mechanisms(const CausalBandit& bandit,
                                                                double p_change,
                                                                const GeneratorOptions& opts,
                                                                Rng& rng) {
  const int n = bandit.n();
  const auto order = shared_topological_order(bandit);
  std::bernoulli_distribution pick(p_change);
  std::bernoulli_distribution edge(opts.edge_prob);
  std::uniform_real_distribution<double> weight(opts.weight_lo, opts.weight_hi);
  Matrix b_obs = bandit.b_obs();
  Matrix b_int = bandit.b_int();
  std::vector<int> changed;
  for (int q = 0; q < n; ++q) {
    const int node = order[static_cast<std::size_t>(q)];
    if (!pick(rng)) continue;
    b_obs.col(node).setZero();
    b_int.col(node).setZero();
    for (int p = 0; p < q; ++p) {
      const int parent = order[static_cast<std::size_t>(p)];
      if (edge(rng)) b_obs(parent, node) = weight(rng);
      if (edge(rng)) b_int(parent, node) = weight(rng);
    }
    changed.push_back(node);
  }
  std::sort(changed.begin(), changed.end());
  return {CausalBandit(std::move(b_obs), std::move(b_int), bandit.noise_mean(), bandit.noise_var()),
          std::move(changed)};
}

}  // namespace cbandit
