#include "cbandit/mi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

#include "cbandit/errors.hpp"
#include "cbandit/rng.hpp"

namespace cbandit {

namespace {

constexpr double kJitter = 1e-10;

// psi(m) for m = 0..max_arg (entry 0 unused).
std::vector<double> digamma_table(int max_arg) {
  std::vector<double> psi(static_cast<std::size_t>(max_arg) + 1, 0.0);
  if (max_arg >= 1) psi[1] = -std::numbers::egamma;
  for (int m = 2; m <= max_arg; ++m) {
    psi[static_cast<std::size_t>(m)] = psi[static_cast<std::size_t>(m) - 1] + 1.0 / (m - 1);
  }
  return psi;
}

// Uniform in [-1, 1), a pure function of the sample index.
double index_jitter(std::size_t i) {
  const std::uint64_t bits = mix_seed(0x6b73675f6d69ULL ^ static_cast<std::uint64_t>(i));
  return static_cast<double>(bits >> 11) * 0x1.0p-52 - 1.0;
}

std::vector<double> standardize(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / n);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) / sd + kJitter * index_jitter(i);
  return out;
}

bool is_constant(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo == *hi;
}

// Number of sorted values strictly within radius of center, excluding one
// self match.
int count_within(const std::vector<double>& sorted, double center, double radius) {
  const auto lo = std::partition_point(sorted.begin(), sorted.end(),
                                       [&](double v) { return center - v >= radius; });
  const auto hi = std::partition_point(lo, sorted.end(), [&](double v) { return v - center < radius; });
  return static_cast<int>(hi - lo) - 1;
}

}  // namespace

MiEstimate knn_mi(std::span<const double> xs, std::span<const double> ys, int k) {
  if (xs.size() != ys.size()) throw std::invalid_argument("knn_mi: length mismatch");
  if (k < 1) throw std::invalid_argument("knn_mi: k must be >= 1");
  const int n = static_cast<int>(xs.size());
  if (n <= k) throw InsufficientSamples("knn_mi: need more samples than neighbors");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw std::invalid_argument("knn_mi: non-finite sample");
    }
  }
  if (is_constant(xs) || is_constant(ys)) return MiEstimate{0.0, k, n, true};

  const auto x = standardize(xs);
  const auto y = standardize(ys);

  std::vector<int> by_x(static_cast<std::size_t>(n));
  std::iota(by_x.begin(), by_x.end(), 0);
  std::sort(by_x.begin(), by_x.end(), [&](int a, int b) { return x[a] < x[b] || (x[a] == x[b] && a < b); });
  std::vector<double> sorted_x(x.size());
  std::vector<double> sorted_y(y);
  for (std::size_t r = 0; r < by_x.size(); ++r) sorted_x[r] = x[static_cast<std::size_t>(by_x[r])];
  std::sort(sorted_y.begin(), sorted_y.end());

  const auto psi = digamma_table(n + 1);
  std::vector<double> marginal_terms(static_cast<std::size_t>(n));
  std::priority_queue<double> nearest;  // max-heap of the k best distances

  for (int r = 0; r < n; ++r) {
    const int i = by_x[static_cast<std::size_t>(r)];
    const double xi = x[static_cast<std::size_t>(i)];
    const double yi = y[static_cast<std::size_t>(i)];
    nearest = {};
    int left = r - 1;
    int right = r + 1;
    // Walk outward in x order; stop once |dx| alone exceeds the k-th best.
    while (left >= 0 || right < n) {
      const double dl = left >= 0 ? xi - sorted_x[static_cast<std::size_t>(left)]
                                  : std::numeric_limits<double>::infinity();
      const double dr = right < n ? sorted_x[static_cast<std::size_t>(right)] - xi
                                  : std::numeric_limits<double>::infinity();
      const bool take_left = dl <= dr;
      const double dx = take_left ? dl : dr;
      if (static_cast<int>(nearest.size()) == k && dx >= nearest.top()) break;
      const int j = by_x[static_cast<std::size_t>(take_left ? left-- : right++)];
      const double d = std::max(dx, std::abs(y[static_cast<std::size_t>(j)] - yi));
      if (static_cast<int>(nearest.size()) < k) {
        nearest.push(d);
      } else if (d < nearest.top()) {
        nearest.pop();
        nearest.push(d);
      }
    }
    const double eps = nearest.top();
    const int nx = count_within(sorted_x, xi, eps);
    const int ny = count_within(sorted_y, yi, eps);
    marginal_terms[static_cast<std::size_t>(i)] =
        psi[static_cast<std::size_t>(nx) + 1] + psi[static_cast<std::size_t>(ny) + 1];
  }

  // Summed in original index order so swapping arguments is bit-identical.
  double sum = 0.0;
  for (double v : marginal_terms) sum += v;
  const double value = psi[static_cast<std::size_t>(k)] + psi[static_cast<std::size_t>(n)] - sum / n;
  return MiEstimate{value, k, n, false};
}

double weight_penalty(double weight) {
  return -std::log(std::max(std::abs(weight), kMinEdgeWeight));
}

double edge_weighted_mi(std::span<const double> residuals, std::span<const double> parent_values,
                        double weight, int k) {
  if (!std::isfinite(weight)) throw std::invalid_argument("edge_weighted_mi: non-finite weight");
  return knn_mi(residuals, parent_values, k).value + weight_penalty(weight);
}

}  // namespace cbandit
