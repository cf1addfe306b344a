#pragma once

// Kraskov-Stogbauer-Grassberger (algorithm 1) mutual information between two
// scalar sample vectors, plus the edge-weighted score used for rejection.

#include <span>

namespace cbandit {

inline constexpr int kDefaultMiNeighbors = 3;
// |weight| floor inside edge_weighted_mi.
inline constexpr double kMinEdgeWeight = 1e-6;

struct MiEstimate {
  double value = 0.0;  // nats; may be slightly negative
  int k = 0;
  int n = 0;
  bool degenerate = false;  // a coordinate was constant; value forced to 0
};

// Inputs are standardized and perturbed by a deterministic 1e-10 jitter
// keyed on sample index, so ties never occur and the result is symmetric in
// (xs, ys). Throws InsufficientSamples when n <= k.
MiEstimate knn_mi(std::span<const double> xs, std::span<const double> ys,
                  int k = kDefaultMiNeighbors);

// I(residual; parent) - log max(|weight|, kMinEdgeWeight).
double edge_weighted_mi(std::span<const double> residuals, std::span<const double> parent_values,
                        double weight, int k = kDefaultMiNeighbors);

double weight_penalty(double weight);

}  // namespace cbandit
