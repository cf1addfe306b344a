#include "cbandit/metrics.hpp"

#include <stdexcept>

namespace cbandit {

namespace {

void check_shapes(const Matrix& b_true, const Matrix& b_hat) {
  if (b_true.rows() != b_true.cols() || b_hat.rows() != b_true.rows() || b_hat.cols() != b_true.cols()) {
    throw std::invalid_argument("metrics: matrices must be square and the same size");
  }
}

}  // namespace

bool graph_fn_indicator(const Matrix& b_true, const Matrix& b_hat) {
  check_shapes(b_true, b_hat);
  for (Eigen::Index i = 0; i < b_true.rows(); ++i) {
    for (Eigen::Index j = 0; j < b_true.cols(); ++j) {
      if (b_true(i, j) != 0.0 && b_hat(i, j) == 0.0) return true;
    }
  }
  return false;
}

SupportCounts support_counts(const Matrix& b_true, const Matrix& b_hat) {
  check_shapes(b_true, b_hat);
  SupportCounts c;
  for (Eigen::Index i = 0; i < b_true.rows(); ++i) {
    for (Eigen::Index j = 0; j < b_true.cols(); ++j) {
      const bool t = b_true(i, j) != 0.0;
      const bool e = b_hat(i, j) != 0.0;
      c.true_edges += t;
      c.estimated_edges += e;
      c.shared_edges += t && e;
    }
  }
  return c;
}

PrecisionRecall precision_recall(const SupportCounts& c) {
  PrecisionRecall pr;
  if (c.estimated_edges > 0) pr.precision = static_cast<double>(c.shared_edges) / c.estimated_edges;
  if (c.true_edges > 0) pr.recall = static_cast<double>(c.shared_edges) / c.true_edges;
  return pr;
}

PrecisionRecall precision_recall(const Matrix& b_true, const Matrix& b_hat) {
  return precision_recall(support_counts(b_true, b_hat));
}

double nshd(const Matrix& b_true, const Matrix& b_hat) {
  check_shapes(b_true, b_hat);
  const Eigen::Index n = b_true.rows();
  if (n == 0) return 0.0;
  int total = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const bool t = b_true(i, j) != 0.0;
      const bool e = b_hat(i, j) != 0.0;
      if (!t && e) ++total;
      if (t && !e) ++total;
      if (t && !e && b_hat(j, i) != 0.0) --total;
    }
  }
  return static_cast<double>(total) / static_cast<double>(n * n);
}

}  // namespace cbandit
