#include <doctest.h>

#include <cmath>

#include "cbandit/errors.hpp"
#include "cbandit/estimation.hpp"
#include "fixtures.hpp"

using namespace cbandit;

namespace {

Matrix draw(const CausalBandit& b, int t, Rng& rng) {
  Matrix x(b.n(), t);
  for (int s = 0; s < t; ++s) x.col(s) = sample(b, Intervention(b.n()), rng);
  return x;
}

}  // namespace

TEST_CASE("noiseless regression recovers the weight") {
  Rng rng(1);
  std::normal_distribution<double> g;
  Matrix parent(1, 50);
  Vector target(50);
  for (int s = 0; s < 50; ++s) {
    parent(0, s) = g(rng);
    target(s) = 2.0 * parent(0, s) + 0.5;
  }
  const SubgraphEstimate e = fit_subgraph(parent, target, 0.5, 0.0);
  CHECK(e.weights(0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(e.residual_var < 1e-16);
}

TEST_CASE("independent target gives a vanishing weight") {
  Rng rng(2);
  std::normal_distribution<double> g;
  const int t = 10000;
  Matrix parent(1, t);
  Vector target(t);
  for (int s = 0; s < t; ++s) {
    parent(0, s) = g(rng);
    target(s) = 1.0 + g(rng);
  }
  const SubgraphEstimate e = fit_subgraph(parent, target, 1.0);
  CHECK(std::abs(e.weights(0)) <= 3.0 * std::sqrt(e.weight_cov(0, 0)));
}

TEST_CASE("residuals are orthogonal to regressors and covariance is PSD") {
  Rng rng(3);
  const CausalBandit b = fixture::unit_noise(fixture::example_graph(), fixture::example_graph());
  const Matrix x = draw(b, 300, rng);
  const SubgraphEstimate e = fit_subgraph(x, 4, 0, {0, 1, 2, 3}, 1.0, 0.0);
  CHECK(e.sample_count == 300);
  CHECK(e.residuals.size() == 300);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(x.row(j).dot(e.residuals)) / 300.0 <= 1e-8);
  CHECK((e.weight_cov - e.weight_cov.transpose()).norm() == 0.0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(e.weight_cov);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  CHECK(e.weight_cov_lambda_max() == doctest::Approx(es.eigenvalues().maxCoeff()));
}

TEST_CASE("empty parent set and rank-deficient designs") {
  Vector target(3);
  target << 1.0, 2.0, 3.0;
  const SubgraphEstimate e = fit_subgraph(Matrix(0, 3), target, 2.0);
  CHECK(e.weights.size() == 0);
  CHECK(e.residuals(0) == doctest::Approx(1.0));
  CHECK(e.weight_cov_lambda_max() == 0.0);
  Matrix dup(2, 3);
  dup << 1, 2, 3, 1, 2, 3;
  CHECK_THROWS_AS(fit_subgraph(dup, target, 0.0, 0.0), IllConditioned);
  CHECK_NOTHROW(fit_subgraph(dup, target, 0.0));
  Matrix short_design(2, 1);
  short_design << 1.0, 2.0;
  const SubgraphEstimate tiny = fit_subgraph(short_design, Vector::Ones(1), 0.0);
  CHECK(std::isfinite(tiny.residual_var));
}

TEST_CASE("superset parents leave weights unbiased") {
  // 0 -> 2 only; node 1 is an independent root included as a spurious parent.
  Matrix w = Matrix::Zero(3, 3);
  w(0, 2) = 1.5;
  const CausalBandit b = fixture::unit_noise(w, w);
  Rng rng(4);
  const int reps = 100;
  std::array<double, 2> sum{}, sq{};
  for (int r = 0; r < reps; ++r) {
    const Matrix x = draw(b, 200, rng);
    const SubgraphEstimate e = fit_subgraph(x, 2, 0, {0, 1}, 1.0);
    for (int k = 0; k < 2; ++k) {
      sum[k] += e.weights(k);
      sq[k] += e.weights(k) * e.weights(k);
    }
  }
  const std::array<double, 2> truth{1.5, 0.0};
  for (int k = 0; k < 2; ++k) {
    const double mean = sum[k] / reps;
    const double se = std::sqrt((sq[k] / reps - mean * mean) / reps);
    CHECK(std::abs(mean - truth[k]) <= 3.0 * se);
  }
}

TEST_CASE("rejected correlated parent biases the kept weight as predicted") {
  // 0 -> 1 -> 2 and 0 -> 2; fitting node 2 on {1} alone drops the ancestor 0.
  Matrix w = Matrix::Zero(3, 3);
  w(0, 1) = 1.0;
  w(1, 2) = 0.8;
  w(0, 2) = 1.2;
  const CausalBandit b = fixture::unit_noise(w, w);
  Rng rng(6);
  for (int t : {200, 2000}) {
    // Fixed design for nodes 0 and 1; only node 2's noise is redrawn.
    const Matrix x = draw(b, t, rng);
    Vector kept(1), rejected(1);
    kept << 0.8;
    rejected << 1.2;
    const Vector predicted = fn_bias_prediction(kept, rejected, {1}, {0}, x);
    std::normal_distribution<double> g(1.0, 1.0);
    const int reps = 200;
    double sum = 0.0, sq = 0.0;
    for (int r = 0; r < reps; ++r) {
      Matrix y = x;
      for (int s = 0; s < t; ++s) y(2, s) = 0.8 * y(1, s) + 1.2 * y(0, s) + g(rng);
      const double v = fit_subgraph(y, 2, 0, {1}, 1.0, 0.0).weights(0);
      sum += v;
      sq += v * v;
    }
    const double mean = sum / reps;
    const double se = std::sqrt((sq / reps - mean * mean) / reps);
    CHECK(std::abs(mean - predicted(0)) <= 3.0 * se);
    CHECK(std::abs(predicted(0) - 0.8) > 0.1);
  }
}

TEST_CASE("bias vanishes for an orthogonal rejected parent") {
  Matrix x(3, 4);
  x << 1, -1, 1, -1,
       1, 1, -1, -1,
       0, 0, 0, 0;
  Vector kept(1), rejected(1);
  kept << 0.7;
  rejected << 3.0;
  CHECK(fn_bias_prediction(kept, rejected, {0}, {1}, x)(0) == doctest::Approx(0.7));
}

TEST_CASE("assemble and decompose are inverse") {
  const Matrix b = fixture::example_graph();
  CHECK(assemble_weight_matrix(decompose_weight_matrix(b), 5) == b);
  CHECK(assemble_weight_matrix(decompose_weight_matrix(Matrix::Zero(4, 4)), 4).isZero());
  const auto parts = decompose_weight_matrix(b);
  CHECK(parts[4].parents == std::vector<int>{2, 3});
  CHECK(parts[2].parents == std::vector<int>{1});
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const CausalBandit r = generate_bandit(7, {}, rng);
    CHECK(assemble_weight_matrix(decompose_weight_matrix(r.b_int(), 1), 7) == r.b_int());
  }
}
