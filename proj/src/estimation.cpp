#include "cbandit/estimation.hpp"

#include <cmath>
#include <stdexcept>

#include "cbandit/errors.hpp"

namespace cbandit {

namespace {

constexpr double kMinRcond = 1e-13;

Matrix gather_rows(const Matrix& samples, const std::vector<int>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), samples.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = samples.row(rows[k]);
  return out;
}

// Eigen's rcond estimate misses exact zero pivots, so the pivot spread is
// checked directly as well.
bool well_conditioned(const Eigen::LDLT<Matrix>& ldlt) {
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
  const Vector d = ldlt.vectorD().cwiseAbs();
  if (!(d.minCoeff() > kMinRcond * d.maxCoeff())) return false;
  return ldlt.rcond() > kMinRcond;
}

}  // namespace

double SubgraphEstimate::weight_cov_lambda_max() const {
  if (weight_cov.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(weight_cov, Eigen::EigenvaluesOnly);
  return std::max(0.0, eig.eigenvalues().maxCoeff());
}

double default_ridge(const Matrix& gram) {
  if (gram.rows() == 0) return 0.0;
  return 1e-6 * gram.trace() / static_cast<double>(gram.rows());
}

SubgraphEstimate fit_subgraph(const Matrix& parent_values, const Vector& target, double target_mean,
                              std::optional<double> ridge) {
  const auto t = target.size();
  const auto p = parent_values.rows();
  if (t < 1) throw InsufficientSamples("fit_subgraph: no samples");
  if (parent_values.cols() != t) throw std::invalid_argument("fit_subgraph: sample count mismatch");
  if (ridge && *ridge < 0.0) throw std::invalid_argument("fit_subgraph: negative ridge");

  SubgraphEstimate est;
  est.sample_count = static_cast<int>(t);
  const Vector centered = target.array() - target_mean;

  if (p == 0) {
    est.weights = Vector(0);
    est.weight_cov = Matrix(0, 0);
    est.residuals = -centered;
  } else {
    Matrix gram = parent_values * parent_values.transpose();
    const double lambda = ridge.value_or(default_ridge(gram));
    gram.diagonal().array() += lambda;
    Eigen::LDLT<Matrix> ldlt(gram);
    if (!well_conditioned(ldlt)) {
      throw IllConditioned("fit_subgraph: Gram matrix is numerically singular");
    }
    est.weights = ldlt.solve(parent_values * centered);
    est.weight_cov = ldlt.solve(Matrix::Identity(p, p));
    est.residuals = parent_values.transpose() * est.weights - centered;
  }

  const auto dof = t > p ? t - p : Eigen::Index{1};
  est.residual_var = est.residuals.squaredNorm() / static_cast<double>(dof);
  est.weight_cov *= est.residual_var;
  // Symmetrize away round-off from the solve.
  if (p > 0) est.weight_cov = (0.5 * (est.weight_cov + est.weight_cov.transpose())).eval();
  return est;
}

SubgraphEstimate fit_subgraph(const Matrix& samples, int node, int mode, const std::vector<int>& parents,
                              double target_mean, std::optional<double> ridge) {
  auto est = fit_subgraph(gather_rows(samples, parents), samples.row(node).transpose(), target_mean, ridge);
  est.node = node;
  est.mode = mode;
  est.parents = parents;
  return est;
}

Vector fn_bias_prediction(const Vector& kept_true_weights, const Vector& rejected_true_weights,
                          const std::vector<int>& kept, const std::vector<int>& rejected,
                          const Matrix& samples, double ridge) {
  if (rejected.empty()) throw std::invalid_argument("fn_bias_prediction: no rejected parents");
  if (static_cast<std::size_t>(kept_true_weights.size()) != kept.size() ||
      static_cast<std::size_t>(rejected_true_weights.size()) != rejected.size()) {
    throw std::invalid_argument("fn_bias_prediction: weight/parent size mismatch");
  }
  if (kept.empty()) return Vector(0);
  const Matrix xq = gather_rows(samples, kept);
  const Matrix xr = gather_rows(samples, rejected);
  Matrix gram = xq * xq.transpose();
  gram.diagonal().array() += ridge;
  Eigen::LDLT<Matrix> ldlt(gram);
  if (!well_conditioned(ldlt)) {
    throw IllConditioned("fn_bias_prediction: Gram matrix is numerically singular");
  }
  return kept_true_weights + ldlt.solve(xq * (xr.transpose() * rejected_true_weights));
}

Matrix assemble_weight_matrix(const std::vector<SubgraphEstimate>& subgraphs, int n) {
  Matrix b = Matrix::Zero(n, n);
  for (const auto& sg : subgraphs) {
    for (std::size_t k = 0; k < sg.parents.size(); ++k) {
      b(sg.parents[k], sg.node) = sg.weights(static_cast<Eigen::Index>(k));
    }
  }
  return b;
}

std::vector<SubgraphEstimate> decompose_weight_matrix(const Matrix& weights, int mode) {
  const auto n = static_cast<int>(weights.rows());
  std::vector<SubgraphEstimate> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& sg = out[static_cast<std::size_t>(i)];
    sg.node = i;
    sg.mode = mode;
    for (int j = 0; j < n; ++j) {
      if (weights(j, i) != 0.0) sg.parents.push_back(j);
    }
    sg.weights.resize(static_cast<Eigen::Index>(sg.parents.size()));
    for (std::size_t k = 0; k < sg.parents.size(); ++k) {
      sg.weights(static_cast<Eigen::Index>(k)) = weights(sg.parents[k], i);
    }
  }
  return out;
}

EstimatedModel EstimatedModel::empty(int n, const Vector& noise_mean) {
  EstimatedModel m;
  m.n = n;
  m.noise_mean = noise_mean;
  for (int mode = 0; mode < 2; ++mode) {
    m.b_hat[mode] = Matrix::Zero(n, n);
    m.subgraphs[mode].assign(static_cast<std::size_t>(n), std::nullopt);
    m.window_start[mode].assign(static_cast<std::size_t>(n), 0);
    m.fallback[mode].assign(static_cast<std::size_t>(n), true);
  }
  return m;
}

const SubgraphEstimate* EstimatedModel::subgraph(int mode, int node) const {
  const auto& sg = subgraphs[static_cast<std::size_t>(mode)][static_cast<std::size_t>(node)];
  return sg ? &*sg : nullptr;
}

}  // namespace cbandit
