#pragma once

#include <cstdint>
#include <vector>

#include "cbandit/linsem.hpp"

namespace cbandit {

// Piecewise-stationary sequence of bandits. A change at step c means steps
// 1..c follow the old segment and steps c+1.. follow the new one.
class Environment {
 public:
  explicit Environment(CausalBandit stationary);

  static Environment piecewise(CausalBandit initial, const std::vector<int>& change_steps,
                               double p_change, const GeneratorOptions& opts, Rng& rng);

  int n() const { return segments_.front().n(); }
  int segment_at(int step) const;
  const CausalBandit& bandit_at(int step) const { return segments_[segment_at(step)]; }
  const CausalBandit& segment(int k) const { return segments_[static_cast<std::size_t>(k)]; }
  int segment_count() const { return static_cast<int>(segments_.size()); }

  double arm_mean(int step, std::uint64_t code) const;
  double optimal_value(int step) const;
  std::uint64_t optimal_code(int step) const;
  std::uint64_t optimal_code_of_segment(int k) const {
    return optimal_code_[static_cast<std::size_t>(k)];
  }

  const std::vector<int>& change_steps() const { return change_steps_; }
  // Nodes whose (B, B') column pair actually differs across each change.
  const std::vector<std::vector<int>>& changed_nodes() const { return changed_nodes_; }

 private:
  Environment() = default;
  void add_segment(CausalBandit b);

  std::vector<CausalBandit> segments_;
  std::vector<int> change_steps_;
  std::vector<std::vector<int>> changed_nodes_;
  std::vector<std::vector<double>> means_;
  std::vector<std::uint64_t> optimal_code_;
  std::vector<double> optimal_value_;
};

}  // namespace cbandit
