#pragma once

// Per-sub-graph least-squares estimation. A sub-graph is one node together
// with its incoming edges; each is fit on its own sample set.

#include <array>
#include <optional>
#include <vector>

#include "cbandit/linsem.hpp"

namespace cbandit {

struct SubgraphEstimate {
  int node = 0;
  int mode = 0;
  std::vector<int> parents;
  Vector weights;       // aligned with parents
  Vector residuals;     // fitted - observed, one per sample
  double residual_var = 0.0;
  Matrix weight_cov;    // |parents| x |parents|
  int sample_count = 0;

  // Largest eigenvalue of weight_cov; 0 for an empty parent set.
  double weight_cov_lambda_max() const;
};

// Regresses (target - target_mean) on the parent rows without an intercept.
// parent_values is |P| x t, target has length t. A missing ridge selects
// 1e-6 * trace(Gram) / |P|.
SubgraphEstimate fit_subgraph(const Matrix& parent_values, const Vector& target,
                              double target_mean, std::optional<double> ridge = std::nullopt);

// Convenience overload: pulls rows `parents` and `node` out of a full N x t
// sample matrix and tags the estimate.
SubgraphEstimate fit_subgraph(const Matrix& samples, int node, int mode,
                              const std::vector<int>& parents, double target_mean,
                              std::optional<double> ridge = std::nullopt);

double default_ridge(const Matrix& gram);

// Expected kept-parent weights when the true parents `rejected` are left out
// of the regression: w_Q + (X_Q X_Q^T)^{-1} X_Q X_R^T w_R, evaluated on the
// realized sample matrix (N x t).
Vector fn_bias_prediction(const Vector& kept_true_weights, const Vector& rejected_true_weights,
                          const std::vector<int>& kept, const std::vector<int>& rejected,
                          const Matrix& samples, double ridge = 0.0);

Matrix assemble_weight_matrix(const std::vector<SubgraphEstimate>& subgraphs, int n);

// Splits a weight matrix into per-node sub-graphs (parents = nonzero rows of
// each column). Inverse of assemble_weight_matrix.
std::vector<SubgraphEstimate> decompose_weight_matrix(const Matrix& weights, int mode = 0);

// Estimated causal model for both modes.
struct EstimatedModel {
  int n = 0;
  Vector noise_mean;
  std::array<Matrix, 2> b_hat;  // [0] observational, [1] interventional
  std::array<std::vector<std::optional<SubgraphEstimate>>, 2> subgraphs;
  // First step index usable by each (mode, node) sub-graph.
  std::array<std::vector<int>, 2> window_start;
  // (mode, node) pairs that had too few samples on the last refit.
  std::array<std::vector<bool>, 2> fallback;

  static EstimatedModel empty(int n, const Vector& noise_mean);

  const SubgraphEstimate* subgraph(int mode, int node) const;
  Matrix composed(const Intervention& a) const {
    return compose_post_intervention(b_hat[0], b_hat[1], a);
  }
};

}  // namespace cbandit
