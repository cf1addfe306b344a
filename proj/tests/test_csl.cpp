#include <doctest.h>

#include <cmath>

#include "cbandit/csl.hpp"
#include "cbandit/errors.hpp"
#include "cbandit/metrics.hpp"
#include "fixtures.hpp"

using namespace cbandit;

namespace {

Matrix draw(const CausalBandit& b, const Intervention& a, int t, Rng& rng) {
  Matrix x(b.n(), t);
  for (int s = 0; s < t; ++s) x.col(s) = sample(b, a, rng);
  return x;
}

Adjacency support(const Matrix& w) { return (w.array() != 0.0).cast<std::uint8_t>(); }

}  // namespace

TEST_CASE("dag check") {
  CHECK(is_dag(Adjacency::Zero(3, 3)).acyclic);
  Adjacency two = Adjacency::Zero(2, 2);
  two(0, 1) = two(1, 0) = 1;
  const DagCheck bad = is_dag(two);
  CHECK_FALSE(bad.acyclic);
  CHECK(bad.cyclic_nodes == std::vector<int>{0, 1});
  Adjacency full = complete_candidates(4);
  CHECK_FALSE(is_dag(full).acyclic);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < j; ++i) full(j, i) = 0;
  }
  const DagCheck ok = is_dag(full);
  CHECK(ok.acyclic);
  CHECK(ok.order == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("single node and two-node recovery") {
  Rng rng(1);
  const GraphEstimate one = learn_graph(Matrix::Ones(1, 5), Vector::Ones(1));
  CHECK(one.weights.isZero());
  CHECK(one.passes == 0);

  Matrix w = Matrix::Zero(2, 2);
  w(0, 1) = 2.0;
  const CausalBandit b = fixture::unit_noise(w, w);
  const GraphEstimate g = learn_graph(draw(b, Intervention(2), 400, rng), b.noise_mean());
  CHECK(g.weights(0, 1) != 0.0);
  CHECK(std::abs(g.weights(0, 1) - 2.0) < 0.1);
  CHECK(g.weights(1, 0) == 0.0);
}

TEST_CASE("loop invariants on random bandits") {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const CausalBandit b = generate_bandit(6, {}, rng);
    std::vector<RejectionStep> seen;
    const GraphEstimate g =
        learn_graph(draw(b, Intervention(6), 100, rng), b.noise_mean(), {}, [&](const RejectionStep& s) { seen.push_back(s); });
    CHECK(is_acyclic(g.weights));
    CHECK(g.passes <= 30);
    CHECK(seen.size() == g.trace.size());
    for (std::size_t k = 0; k < seen.size(); ++k) {
      CHECK(seen[k].pass == static_cast<int>(k) + 1);
      CHECK(g.weights(seen[k].from, seen[k].to) == 0.0);
      CHECK(seen[k].score == doctest::Approx(seen[k].mi - std::log(std::max(std::abs(seen[k].weight), 1e-6))));
    }
  }
}

TEST_CASE("scoring a sub-graph uses its own fit") {
  Rng rng(3);
  const CausalBandit b = fixture::unit_noise(fixture::example_graph(), fixture::example_graph());
  const Matrix x = draw(b, Intervention(5), 200, rng);
  const SubgraphScores s = score_subgraph(x, 4, {0, 1, 2, 3}, 1.0, {});
  const SubgraphEstimate direct = fit_subgraph(x, 4, 0, {0, 1, 2, 3}, 1.0);
  CHECK((s.fit.weights - direct.weights).norm() == 0.0);
  REQUIRE(s.scores.size() == 4);
  for (int k = 0; k < 4; ++k) {
    std::vector<double> r(direct.residuals.data(), direct.residuals.data() + 200);
    std::vector<double> p(200);
    for (int t = 0; t < 200; ++t) p[t] = x(k, t);
    CHECK(s.scores[k] == edge_weighted_mi(r, p, direct.weights(k)));
  }
}

TEST_SUITE("targets") {
TEST_CASE("example graph recall over seeds") {
  const CausalBandit b = fixture::unit_noise(fixture::example_graph(), fixture::example_graph());
  Rng rng(4);
  double recall = 0.0;
  for (int seed = 0; seed < 20; ++seed) {
    const GraphEstimate g = learn_graph(draw(b, Intervention(5), 400, rng), b.noise_mean());
    recall += *precision_recall(b.b_obs(), g.weights).recall;
  }
  CHECK(recall / 20.0 >= 0.99);
}
}  // TEST_SUITE("targets")

TEST_CASE("joint rejection differs from frozen one-shot ranking somewhere") {
  Rng rng(5);
  bool differs = false;
  for (int trial = 0; trial < 50 && !differs; ++trial) {
    const CausalBandit b = generate_bandit(6, {}, rng);
    const Matrix x = draw(b, Intervention(6), 200, rng);
    differs = support(learn_graph(x, b.noise_mean()).weights) != one_shot_rejection(x, b.noise_mean());
  }
  CHECK(differs);
}

TEST_CASE("both modes are learned from their own samples") {
  // Chain 0 -> 1 -> 2 observationally; the interventional mode flips signs.
  Matrix w = Matrix::Zero(3, 3);
  w(0, 1) = 1.5;
  w(1, 2) = -1.2;
  const Matrix w_int = -w;
  const CausalBandit b = fixture::unit_noise(w, w_int);
  Rng rng(6);
  ObservationLog log;
  for (int t = 1; t <= 600; ++t) {
    const Intervention a = Intervention::all(3, t % 2 == 0);
    log.append(t, a, sample(b, a, rng));
  }
  ModeSampleWindow windows;
  for (auto& s : windows.start) s.assign(3, 0);
  const EstimatedModel m = learn_both_modes(log, windows, b.noise_mean());
  CHECK(support(m.b_hat[0]) == support(w));
  CHECK(support(m.b_hat[1]) == support(w_int));
  CHECK(std::abs(m.b_hat[1](0, 1) + 1.5) < 0.1);
  for (int i = 0; i < 3; ++i) {
    CHECK_FALSE(m.fallback[0][i]);
    CHECK(m.subgraph(1, i)->sample_count == 300);
  }
}

TEST_CASE("observational-only log leaves the interventional mode flagged") {
  Rng rng(7);
  const CausalBandit b = fixture::unit_noise(fixture::chain3(), fixture::chain3());
  ObservationLog log;
  for (int t = 1; t <= 50; ++t) log.append(t, Intervention(3), sample(b, Intervention(3), rng));
  ModeSampleWindow windows;
  for (auto& s : windows.start) s.assign(3, 0);
  const EstimatedModel m = learn_both_modes(log, windows, b.noise_mean());
  CHECK(m.b_hat[1].isZero());
  for (int i = 0; i < 3; ++i) {
    CHECK(m.fallback[1][i]);
    CHECK(m.subgraph(1, i) == nullptr);
  }
  // A later refit with still no data keeps the previous estimate.
  const EstimatedModel again = learn_both_modes(log, windows, b.noise_mean(), {}, &m);
  CHECK(again.b_hat[0] == m.b_hat[0]);
}

TEST_CASE("window start drops pre-change samples") {
  Matrix before = Matrix::Zero(2, 2), after = Matrix::Zero(2, 2);
  before(0, 1) = 2.0;
  after(0, 1) = -1.0;
  const CausalBandit b0 = fixture::unit_noise(before, before);
  const CausalBandit b1 = fixture::unit_noise(after, after);
  Rng rng(8);
  ObservationLog log;
  for (int t = 1; t <= 600; ++t) log.append(t, Intervention(2), sample(t <= 400 ? b0 : b1, Intervention(2), rng));
  ModeSampleWindow windows;
  for (auto& s : windows.start) s.assign(2, 0);
  windows.start[0][1] = 401;
  const EstimatedModel m = learn_both_modes(log, windows, b0.noise_mean());
  CHECK(m.subgraph(0, 1)->sample_count == 200);
  CHECK(std::abs(m.b_hat[0](0, 1) + 1.0) < 0.15);
}
