#pragma once

// Causal sub-graph learning: start from the complete directed graph, fit
// every node on its current candidate parents, score each candidate edge by
// edge-weighted mutual information and drop the single highest-scoring edge
// until the graph is acyclic. Weights are then refit on the survivors.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbandit/estimation.hpp"
#include "cbandit/mi.hpp"

namespace cbandit {

// adjacency(j, i) != 0 means the edge j -> i is still a candidate.
using Adjacency = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

struct DagCheck {
  bool acyclic = false;
  std::vector<int> order;         // topological order when acyclic
  std::vector<int> cyclic_nodes;  // nodes left after peeling otherwise
};

DagCheck is_dag(const Adjacency& edges);

Adjacency complete_candidates(int n);

struct CslConfig {
  int mi_k = kDefaultMiNeighbors;
  std::optional<double> ridge;  // nullopt: per-fit default ridge
};

struct RejectionStep {
  int pass = 0;
  int from = 0;
  int to = 0;
  double score = 0.0;
  double mi = 0.0;
  double weight = 0.0;

  nlohmann::json to_json() const;
};

struct GraphEstimate {
  Matrix weights;
  std::vector<std::optional<SubgraphEstimate>> subgraphs;  // nullopt: too few samples
  std::vector<RejectionStep> trace;
  int passes = 0;
};

using TraceSink = std::function<void(const RejectionStep&)>;

// per_node_samples[i] is the N x t_i matrix of full node vectors available to
// node i's sub-graph (t_i may differ by node). Nodes with fewer than 2 samples
// get no candidate parents and a nullopt sub-graph.
GraphEstimate learn_graph(const std::vector<Matrix>& per_node_samples, const Vector& noise_mean,
                          const CslConfig& config = {}, const TraceSink& sink = {});

// Shared N x t sample matrix for every node (purely observational data).
GraphEstimate learn_graph(const Matrix& samples, const Vector& noise_mean, const CslConfig& config = {},
                          const TraceSink& sink = {});

// Baseline for the coupling test: edges ranked once by their scores on the
// complete graph and removed in that fixed order until acyclic, with no
// refitting between removals. Returns the surviving adjacency.
Adjacency one_shot_rejection(const Matrix& samples, const Vector& noise_mean, const CslConfig& config = {});

// Score of every candidate in-edge of node i given its candidate parents;
// the fit uses exactly those parents.
struct SubgraphScores {
  SubgraphEstimate fit;
  std::vector<double> scores;  // aligned with fit.parents
  std::vector<double> mi;
};
SubgraphScores score_subgraph(const Matrix& samples, int node, const std::vector<int>& parents,
                              double target_mean, const CslConfig& config);

struct ModeSampleWindow {
  // window[mode][node]: first usable step for that sub-graph.
  std::array<std::vector<int>, 2> start;
};

// Learns both weight matrices from an interleaved log. Node i's mode-m
// sub-graph sees only steps where a_i == m and step >= start[m][i]. A
// sub-graph with too few samples keeps its estimate from `previous` when
// that keeps the matrix acyclic, otherwise stays empty; either way it is
// flagged in EstimatedModel::fallback.
EstimatedModel learn_both_modes(const ObservationLog& log, const ModeSampleWindow& windows,
                                const Vector& noise_mean, const CslConfig& config = {},
                                const EstimatedModel* previous = nullptr);

}  // namespace cbandit
