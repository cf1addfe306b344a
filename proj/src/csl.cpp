#include "cbandit/csl.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "cbandit/errors.hpp"

namespace cbandit {

namespace {

// Below this many samples the MI term is dropped and only the weight
// penalty ranks the edge.
int min_mi_samples(const CslConfig& config) { return config.mi_k + 2; }

std::vector<int> candidate_parents(const Adjacency& cand, int node) {
  std::vector<int> parents;
  for (int j = 0; j < cand.rows(); ++j) {
    if (cand(j, node)) parents.push_back(j);
  }
  return parents;
}

}  // namespace

DagCheck is_dag(const Adjacency& edges) {
  const auto n = static_cast<int>(edges.rows());
  std::vector<int> indegree(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) indegree[static_cast<std::size_t>(i)] += edges(j, i) != 0;
  }
  DagCheck out;
  std::vector<int> ready;
  for (int i = n - 1; i >= 0; --i) {
    if (indegree[static_cast<std::size_t>(i)] == 0) ready.push_back(i);
  }
  while (!ready.empty()) {
    const int j = ready.back();
    ready.pop_back();
    out.order.push_back(j);
    for (int i = n - 1; i >= 0; --i) {
      if (edges(j, i) && --indegree[static_cast<std::size_t>(i)] == 0) ready.push_back(i);
    }
  }
  out.acyclic = static_cast<int>(out.order.size()) == n;
  if (!out.acyclic) {
    for (int i = 0; i < n; ++i) {
      if (indegree[static_cast<std::size_t>(i)] > 0) out.cyclic_nodes.push_back(i);
    }
  }
  return out;
}

Adjacency complete_candidates(int n) {
  Adjacency a = Adjacency::Ones(n, n);
  a.diagonal().setZero();
  return a;
}

nlohmann::json RejectionStep::to_json() const {
  return {{"pass", pass}, {"from", from}, {"to", to}, {"score", score}, {"mi", mi}, {"weight", weight}};
}

SubgraphScores score_subgraph(const Matrix& samples, int node, const std::vector<int>& parents,
                              double target_mean, const CslConfig& config) {
  SubgraphScores out;
  out.fit = fit_subgraph(samples, node, 0, parents, target_mean, config.ridge);
  const auto t = static_cast<int>(samples.cols());
  const bool use_mi = t >= min_mi_samples(config);
  const std::span<const double> residuals(out.fit.residuals.data(), static_cast<std::size_t>(t));
  Vector row(t);
  for (std::size_t k = 0; k < parents.size(); ++k) {
    const double w = out.fit.weights(static_cast<Eigen::Index>(k));
    double mi = 0.0;
    if (use_mi) {
      row = samples.row(parents[k]).transpose();
      mi = knn_mi(residuals, std::span<const double>(row.data(), static_cast<std::size_t>(t)), config.mi_k).value;
    }
    out.mi.push_back(mi);
    out.scores.push_back(mi + weight_penalty(w));
  }
  return out;
}

GraphEstimate learn_graph(const std::vector<Matrix>& per_node_samples, const Vector& noise_mean,
                          const CslConfig& config, const TraceSink& sink) {
  const auto n = static_cast<int>(per_node_samples.size());
  if (noise_mean.size() != n) throw std::invalid_argument("learn_graph: noise_mean size mismatch");
  std::vector<bool> has_data(static_cast<std::size_t>(n));
  Adjacency cand = complete_candidates(n);
  for (int i = 0; i < n; ++i) {
    const auto& x = per_node_samples[static_cast<std::size_t>(i)];
    if (x.rows() != n) throw std::invalid_argument("learn_graph: sample matrix must have N rows");
    has_data[static_cast<std::size_t>(i)] = x.cols() >= 2;
    if (!has_data[static_cast<std::size_t>(i)]) cand.col(i).setZero();
  }

  GraphEstimate out;
  // A node's scores depend only on its own candidate parents, so after a
  // removal only the touched sub-graph needs rescoring; the result is the
  // same as rescoring every edge on every pass.
  std::vector<std::optional<SubgraphScores>> cache(static_cast<std::size_t>(n));
  const int max_passes = n * n - n;
  while (!is_dag(cand).acyclic) {
    if (out.passes >= max_passes) throw std::logic_error("learn_graph: rejection loop did not terminate");
    for (int i = 0; i < n; ++i) {
      auto& c = cache[static_cast<std::size_t>(i)];
      if (!c && has_data[static_cast<std::size_t>(i)]) {
        c = score_subgraph(per_node_samples[static_cast<std::size_t>(i)], i, candidate_parents(cand, i),
                           noise_mean(i), config);
      }
    }
    // Argmax over (from, to) in lexicographic order; strict '>' keeps the
    // smallest pair on ties.
    RejectionStep best;
    best.score = -std::numeric_limits<double>::infinity();
    std::size_t best_slot = 0;
    bool found = false;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (!cand(j, i)) continue;
        const auto& c = *cache[static_cast<std::size_t>(i)];
        const auto pos = static_cast<std::size_t>(
            std::find(c.fit.parents.begin(), c.fit.parents.end(), j) - c.fit.parents.begin());
        if (!found || c.scores[pos] > best.score) {
          found = true;
          best.from = j;
          best.to = i;
          best.score = c.scores[pos];
          best_slot = pos;
        }
      }
    }
    const auto& c = *cache[static_cast<std::size_t>(best.to)];
    best.mi = c.mi[best_slot];
    best.weight = c.fit.weights(static_cast<Eigen::Index>(best_slot));
    best.pass = ++out.passes;
    cand(best.from, best.to) = 0;
    cache[static_cast<std::size_t>(best.to)].reset();
    if (sink) sink(best);
    out.trace.push_back(best);
  }

  out.subgraphs.resize(static_cast<std::size_t>(n));
  std::vector<SubgraphEstimate> fitted;
  for (int i = 0; i < n; ++i) {
    if (!has_data[static_cast<std::size_t>(i)]) continue;
    auto fit = fit_subgraph(per_node_samples[static_cast<std::size_t>(i)], i, 0, candidate_parents(cand, i),
                            noise_mean(i), config.ridge);
    fitted.push_back(fit);
    out.subgraphs[static_cast<std::size_t>(i)] = std::move(fit);
  }
  out.weights = assemble_weight_matrix(fitted, n);
  return out;
}

GraphEstimate learn_graph(const Matrix& samples, const Vector& noise_mean, const CslConfig& config,
                          const TraceSink& sink) {
  if (samples.cols() < 2) throw InsufficientSamples("learn_graph: need at least 2 samples");
  std::vector<Matrix> per_node(static_cast<std::size_t>(samples.rows()), samples);
  return learn_graph(per_node, noise_mean, config, sink);
}

Adjacency one_shot_rejection(const Matrix& samples, const Vector& noise_mean, const CslConfig& config) {
  const auto n = static_cast<int>(samples.rows());
  Adjacency cand = complete_candidates(n);
  std::vector<std::tuple<double, int, int>> ranked;  // (-score, from, to)
  for (int i = 0; i < n; ++i) {
    const auto s = score_subgraph(samples, i, candidate_parents(cand, i), noise_mean(i), config);
    for (std::size_t k = 0; k < s.fit.parents.size(); ++k) ranked.emplace_back(-s.scores[k], s.fit.parents[k], i);
  }
  std::sort(ranked.begin(), ranked.end());
  for (const auto& [neg_score, from, to] : ranked) {
    if (is_dag(cand).acyclic) break;
    cand(from, to) = 0;
  }
  return cand;
}

EstimatedModel learn_both_modes(const ObservationLog& log, const ModeSampleWindow& windows,
                                const Vector& noise_mean, const CslConfig& config,
                                const EstimatedModel* previous) {
  const auto n = static_cast<int>(noise_mean.size());
  for (int m = 0; m < 2; ++m) {
    if (static_cast<int>(windows.start[static_cast<std::size_t>(m)].size()) != n) {
      throw std::invalid_argument("learn_both_modes: window size mismatch");
    }
  }
  EstimatedModel model = EstimatedModel::empty(n, noise_mean);
  model.window_start = windows.start;

  for (int m = 0; m < 2; ++m) {
    const auto& start = windows.start[static_cast<std::size_t>(m)];
    std::vector<std::vector<std::size_t>> rows(static_cast<std::size_t>(n));
    for (std::size_t s = 0; s < log.size(); ++s) {
      const auto& obs = log[s];
      for (int i = 0; i < n; ++i) {
        if (obs.action.mode(i) == m && obs.step >= start[static_cast<std::size_t>(i)]) {
          rows[static_cast<std::size_t>(i)].push_back(s);
        }
      }
    }
    std::vector<Matrix> per_node(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto& idx = rows[static_cast<std::size_t>(i)];
      Matrix x(n, static_cast<Eigen::Index>(idx.size()));
      for (std::size_t c = 0; c < idx.size(); ++c) x.col(static_cast<Eigen::Index>(c)) = log[idx[c]].values;
      per_node[static_cast<std::size_t>(i)] = std::move(x);
    }

    auto graph = learn_graph(per_node, noise_mean, config);
    Matrix& b = model.b_hat[static_cast<std::size_t>(m)];
    b = graph.weights;
    for (int i = 0; i < n; ++i) {
      auto& slot = model.subgraphs[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)];
      auto& sg = graph.subgraphs[static_cast<std::size_t>(i)];
      if (sg) {
        sg->mode = m;
        slot = std::move(sg);
        model.fallback[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)] = false;
        continue;
      }
      model.fallback[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)] = true;
      const SubgraphEstimate* prev = previous ? previous->subgraph(m, i) : nullptr;
      if (!prev) continue;
      Matrix trial = b;
      for (std::size_t k = 0; k < prev->parents.size(); ++k) {
        trial(prev->parents[k], i) = prev->weights(static_cast<Eigen::Index>(k));
      }
      if (is_acyclic(trial)) {
        b = std::move(trial);
        slot = *prev;
      }
    }
  }
  return model;
}

}  // namespace cbandit
