#pragma once

// Graph-recovery metrics on weight-matrix supports (nonzero entries).

#include <optional>

#include "cbandit/linsem.hpp"

namespace cbandit {

// True when some edge of b_true is missing from b_hat.
bool graph_fn_indicator(const Matrix& b_true, const Matrix& b_hat);

struct SupportCounts {
  int true_edges = 0;
  int estimated_edges = 0;
  int shared_edges = 0;
};

SupportCounts support_counts(const Matrix& b_true, const Matrix& b_hat);

struct PrecisionRecall {
  std::optional<double> precision;  // nullopt when b_hat has no edges
  std::optional<double> recall;     // nullopt when b_true has no edges
};

PrecisionRecall precision_recall(const Matrix& b_true, const Matrix& b_hat);
PrecisionRecall precision_recall(const SupportCounts& counts);

// Sum over (i, j) of FP + FN minus a discount for reversed edges, over N^2.
double nshd(const Matrix& b_true, const Matrix& b_hat);

}  // namespace cbandit
