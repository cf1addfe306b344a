#pragma once

// Sub-graph change detection. Observations are whitened with the current
// estimate so that each component is an i.i.d. Gaussian noise draw while the
// sub-graph is unchanged; a per-(node, mode) GLR scan flags segments whose
// mean or variance has moved.

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "cbandit/policy.hpp"

namespace cbandit {

// y = (I - B_hat_a)^T x.
Vector whiten(const EstimatedModel& model, const Vector& x, const Intervention& a);

struct GlrValue {
  double value = 0.0;
  bool degenerate = false;  // post-split variance was zero; value is +inf
};

// Psi(s) for the split after the first `split` values of ys, with the
// pre-change noise mean nu and variance sigma2.
GlrValue glr_statistic(std::span<const double> ys, int split, double nu, double sigma2);

// eta such that a chi-squared(2) variable exceeds 2 eta with probability zeta.
double threshold(double zeta);

struct DetectorConfig {
  double zeta = 0.001;
  int window = 500;       // trailing buffered samples considered per scan
  int min_segment = 20;   // shortest admissible post-split segment

  void validate() const;
};

struct BufferedValue {
  int step = 0;
  double y = 0.0;
};

struct ScanResult {
  double psi_max = 0.0;
  int split = 0;          // number of buffered values before the split
  int change_step = 0;    // step of the last pre-split value
  bool detected = false;
};

class ChangeDetector {
 public:
  ChangeDetector(int n, DetectorConfig cfg);

  int n() const { return n_; }
  double eta() const { return eta_; }
  const DetectorConfig& config() const { return cfg_; }

  // Buffers component i of y under (i, a_i).
  void push(int step, const Vector& y, const Intervention& a);
  void push_value(int node, int mode, int step, double y);

  // Replaces every buffer with the log re-whitened under `model`, keeping
  // only steps inside each sub-graph's window.
  void rebuild(const EstimatedModel& model, const ObservationLog& log);

  // Max of Psi over admissible splits. On detection the buffer is cut to the
  // post-split values and last_change is set. Returns nothing when the
  // buffer is too short.
  std::optional<ScanResult> scan(int node, int mode, double nu, double sigma2);

  const std::deque<BufferedValue>& buffer(int node, int mode) const;
  std::optional<int> last_change(int node, int mode) const;

 private:
  std::size_t slot(int node, int mode) const;

  int n_;
  DetectorConfig cfg_;
  double eta_;
  std::vector<std::deque<BufferedValue>> buffers_;
  std::vector<std::optional<int>> last_change_;
};

// CSL-UCB with whitening on every step and GLR scans right before each
// refit. A detection moves that sub-graph's window start past the estimated
// change, so the refit only uses post-change samples.
RunResult run_csl_ucb_cd(const Environment& env, const UcbConfig& cfg, const CslConfig& csl,
                         const DetectorConfig& detector, int horizon, std::uint64_t seed);

}  // namespace cbandit
