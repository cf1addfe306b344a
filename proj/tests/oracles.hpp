#pragma once

// Independent transcriptions of the closed forms, written without calling
// the library code they check.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// sum_{k=0}^{n-1} B^k, exact for a nilpotent (acyclic) B.
inline MatrixXd neumann_flow(const MatrixXd& b) {
  const auto n = b.rows();
  MatrixXd term = MatrixXd::Identity(n, n);
  MatrixXd sum = term;
  for (Eigen::Index k = 1; k < n; ++k) {
    term = term * b;
    sum += term;
  }
  return sum;
}

// Gaussian log-density.
inline double log_normal(double y, double mean, double var) {
  const double pi = 3.14159265358979323846;
  return -0.5 * std::log(2.0 * pi * var) - (y - mean) * (y - mean) / (2.0 * var);
}

// GLR statistic straight from its likelihood definition: null likelihood on
// the pre-split part, fitted Gaussian on the rest, minus the null on all.
inline double glr_by_definition(const std::vector<double>& ys, int s, double nu, double sigma2) {
  const int t = static_cast<int>(ys.size());
  double mean = 0.0;
  for (int k = s; k < t; ++k) mean += ys[static_cast<std::size_t>(k)];
  mean /= (t - s);
  double var = 0.0;
  for (int k = s; k < t; ++k) var += (ys[static_cast<std::size_t>(k)] - mean) * (ys[static_cast<std::size_t>(k)] - mean);
  var /= (t - s);
  double pre = 0.0, post = 0.0, all = 0.0;
  for (int k = 0; k < s; ++k) pre += log_normal(ys[static_cast<std::size_t>(k)], nu, sigma2);
  for (int k = s; k < t; ++k) post += log_normal(ys[static_cast<std::size_t>(k)], mean, var);
  for (int k = 0; k < t; ++k) all += log_normal(ys[static_cast<std::size_t>(k)], nu, sigma2);
  return pre + post - all;
}

// Reward-error bound from its definition; phis are the per-node weight
// error covariances selected by the arm.
inline double bound_by_definition(const MatrixXd& b_hat_a, const VectorXd& nu, const std::vector<MatrixXd>& phis,
                                  double delta) {
  const auto n = b_hat_a.rows();
  const MatrixXd c = (MatrixXd::Identity(n, n) - b_hat_a).inverse();
  const VectorXd mu = c.transpose() * nu;
  double lam = 0.0;
  for (const auto& phi : phis) {
    if (phi.size() == 0) continue;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(phi);
    lam += es.eigenvalues().maxCoeff();
  }
  const double dn = static_cast<double>(n);
  return 2.0 * std::sqrt(std::sqrt(dn * dn + 2.0 * dn)) * c.col(n - 1).norm() * mu.norm() *
         std::sqrt(std::log(2.0 * dn / delta) * lam);
}

// NSHD with the three indicator sums accumulated separately.
inline double nshd_by_definition(const MatrixXd& b, const MatrixXd& bh) {
  const auto n = b.rows();
  double fp = 0.0, fn = 0.0, rev = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      fp += (b(i, j) == 0.0 && bh(i, j) != 0.0) ? 1.0 : 0.0;
      fn += (b(i, j) != 0.0 && bh(i, j) == 0.0) ? 1.0 : 0.0;
      rev += (b(i, j) != 0.0 && bh(i, j) == 0.0 && bh(j, i) != 0.0) ? 1.0 : 0.0;
    }
  }
  return (fp + fn - rev) / static_cast<double>(n * n);
}

inline double relative_error(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace oracle
