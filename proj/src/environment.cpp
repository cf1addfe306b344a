#include "cbandit/environment.hpp"

#include <algorithm>
#include <stdexcept>

namespace cbandit {

Environment::Environment(CausalBandit stationary) { add_segment(std::move(stationary)); }

void Environment::add_segment(CausalBandit b) {
  auto means = reward_means(b);
  // Strict '>' keeps the lowest code among ties.
  std::uint64_t best = 0;
  for (std::uint64_t c = 1; c < means.size(); ++c) {
    if (means[c] > means[best]) best = c;
  }
  optimal_code_.push_back(best);
  optimal_value_.push_back(means[best]);
  means_.push_back(std::move(means));
  segments_.push_back(std::move(b));
}

Environment Environment::piecewise(CausalBandit initial, const std::vector<int>& change_steps,
                                   double p_change, const GeneratorOptions& opts, Rng& rng) {
  if (!std::is_sorted(change_steps.begin(), change_steps.end()) ||
      std::adjacent_find(change_steps.begin(), change_steps.end()) != change_steps.end()) {
    throw std::invalid_argument("change steps must be strictly increasing");
  }
  Environment env;
  env.add_segment(std::move(initial));
  for (int c : change_steps) {
    const auto& prev = env.segments_.back();
    auto [next, regenerated] = regenerate_mechanisms(prev, p_change, opts, rng);
    std::vector<int> differs;
    for (int node : regenerated) {
      if (prev.b_obs().col(node) != next.b_obs().col(node) ||
          prev.b_int().col(node) != next.b_int().col(node)) {
        differs.push_back(node);
      }
    }
    env.change_steps_.push_back(c);
    env.changed_nodes_.push_back(std::move(differs));
    env.add_segment(std::move(next));
  }
  return env;
}

int Environment::segment_at(int step) const {
  const auto it = std::lower_bound(change_steps_.begin(), change_steps_.end(), step);
  return static_cast<int>(it - change_steps_.begin());
}

double Environment::arm_mean(int step, std::uint64_t code) const {
  return means_[static_cast<std::size_t>(segment_at(step))][code];
}

double Environment::optimal_value(int step) const {
  return optimal_value_[static_cast<std::size_t>(segment_at(step))];
}

std::uint64_t Environment::optimal_code(int step) const {
  return optimal_code_[static_cast<std::size_t>(segment_at(step))];
}

}  // namespace cbandit
