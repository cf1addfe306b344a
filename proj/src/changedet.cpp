#include "cbandit/changedet.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cbandit/errors.hpp"

namespace cbandit {

Vector whiten(const EstimatedModel& model, const Vector& x, const Intervention& a) {
  if (x.size() != model.n || a.size() != model.n) throw std::invalid_argument("whiten: size mismatch");
  const Matrix b_a = model.composed(a);
  return x - b_a.transpose() * x;
}

GlrValue glr_statistic(std::span<const double> ys, int split, double nu, double sigma2) {
  const auto t = static_cast<int>(ys.size());
  if (split < 0 || t - split < 2) throw std::invalid_argument("glr_statistic: need 2 samples after the split");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("glr_statistic: sigma2 must be positive");
  const double m = t - split;
  double sum = 0.0;
  double sq = 0.0;
  for (int k = split; k < t; ++k) {
    const double z = ys[static_cast<std::size_t>(k)] - nu;
    sum += z;
    sq += z * z;
  }
  const double mean = sum / m;
  double var = 0.0;
  for (int k = split; k < t; ++k) {
    const double d = ys[static_cast<std::size_t>(k)] - nu - mean;
    var += d * d;
  }
  var /= m;
  if (!(var > 0.0)) return {std::numeric_limits<double>::infinity(), true};
  return {m / 2.0 * (std::log(sigma2) - std::log(var) - 1.0) + sq / (2.0 * sigma2), false};
}

double threshold(double zeta) {
  if (!(zeta > 0.0 && zeta < 1.0)) throw std::invalid_argument("threshold: zeta must lie in (0, 1)");
  return -std::log(zeta);
}

void DetectorConfig::validate() const {
  if (!(zeta > 0.0 && zeta < 1.0)) throw ConfigInvalid("zeta must lie in (0, 1)");
  if (min_segment < 2) throw ConfigInvalid("min_segment must be at least 2");
  if (window < min_segment + 2) throw ConfigInvalid("window must exceed min_segment + 1");
}

ChangeDetector::ChangeDetector(int n, DetectorConfig cfg)
    : n_(n), cfg_(cfg), eta_(0.0) {
  cfg_.validate();
  eta_ = threshold(cfg_.zeta);
  buffers_.resize(static_cast<std::size_t>(2 * n));
  last_change_.resize(static_cast<std::size_t>(2 * n));
}

std::size_t ChangeDetector::slot(int node, int mode) const {
  if (node < 0 || node >= n_ || mode < 0 || mode > 1) throw std::out_of_range("detector slot");
  return static_cast<std::size_t>(2 * node + mode);
}

void ChangeDetector::push_value(int node, int mode, int step, double y) {
  auto& buf = buffers_[slot(node, mode)];
  if (!buf.empty() && step <= buf.back().step) throw std::invalid_argument("detector: steps must increase");
  buf.push_back({step, y});
  while (static_cast<int>(buf.size()) > cfg_.window) buf.pop_front();
}

void ChangeDetector::push(int step, const Vector& y, const Intervention& a) {
  for (int i = 0; i < n_; ++i) push_value(i, a.mode(i), step, y(i));
}

void ChangeDetector::rebuild(const EstimatedModel& model, const ObservationLog& log) {
  for (auto& b : buffers_) b.clear();
  for (const auto& obs : log.entries()) {
    const Vector y = whiten(model, obs.values, obs.action);
    for (int i = 0; i < n_; ++i) {
      const int m = obs.action.mode(i);
      const auto& lc = last_change_[slot(i, m)];
      if (obs.step < model.window_start[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)]) continue;
      if (lc && obs.step <= *lc) continue;
      push_value(i, m, obs.step, y(i));
    }
  }
}

std::optional<ScanResult> ChangeDetector::scan(int node, int mode, double nu, double sigma2) {
  auto& buf = buffers_[slot(node, mode)];
  const auto t = static_cast<int>(buf.size());
  if (t < 2 + cfg_.min_segment) return std::nullopt;
  if (!(sigma2 > 0.0)) return std::nullopt;

  // Suffix sums of z and z^2 give every split's statistic in O(1).
  std::vector<double> s1(static_cast<std::size_t>(t) + 1, 0.0);
  std::vector<double> s2(static_cast<std::size_t>(t) + 1, 0.0);
  for (int k = t - 1; k >= 0; --k) {
    const double z = buf[static_cast<std::size_t>(k)].y - nu;
    s1[static_cast<std::size_t>(k)] = s1[static_cast<std::size_t>(k) + 1] + z;
    s2[static_cast<std::size_t>(k)] = s2[static_cast<std::size_t>(k) + 1] + z * z;
  }
  const double log_sigma2 = std::log(sigma2);
  ScanResult r;
  r.psi_max = -std::numeric_limits<double>::infinity();
  for (int s = 2; s <= t - cfg_.min_segment; ++s) {
    const double m = t - s;
    const double mean = s1[static_cast<std::size_t>(s)] / m;
    const double var = s2[static_cast<std::size_t>(s)] / m - mean * mean;
    const double psi = var > 0.0
                           ? m / 2.0 * (log_sigma2 - std::log(var) - 1.0) + s2[static_cast<std::size_t>(s)] / (2.0 * sigma2)
                           : std::numeric_limits<double>::infinity();
    if (psi > r.psi_max) {
      r.psi_max = psi;
      r.split = s;
    }
  }
  r.change_step = buf[static_cast<std::size_t>(r.split - 1)].step;
  r.detected = r.psi_max >= eta_;
  if (r.detected) {
    buf.erase(buf.begin(), buf.begin() + r.split);
    last_change_[slot(node, mode)] = r.change_step;
  }
  return r;
}

const std::deque<BufferedValue>& ChangeDetector::buffer(int node, int mode) const {
  return buffers_[slot(node, mode)];
}

std::optional<int> ChangeDetector::last_change(int node, int mode) const {
  return last_change_[slot(node, mode)];
}

namespace {

class DetectingObserver final : public LoopObserver {
 public:
  DetectingObserver(int n, const DetectorConfig& cfg) : detector_(n, cfg) {}

  void on_observation(const Observation& obs, const EstimatedModel& model) override {
    detector_.push(obs.step, whiten(model, obs.values, obs.action), obs.action);
  }

  void before_refit(int step, const EstimatedModel& model, ModeSampleWindow& windows,
                    std::vector<ChangeEvent>& events) override {
    for (int i = 0; i < detector_.n(); ++i) {
      for (int m = 0; m < 2; ++m) {
        const SubgraphEstimate* sg = model.subgraph(m, i);
        if (!sg) continue;
        const auto r = detector_.scan(i, m, model.noise_mean(i), sg->residual_var);
        if (!r || !r->detected) continue;
        windows.start[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)] = r->change_step + 1;
        events.push_back({step, i, m, r->change_step, r->psi_max});
      }
    }
  }

  void after_refit(const ObservationLog& log, const EstimatedModel& model) override {
    detector_.rebuild(model, log);
  }

 private:
  ChangeDetector detector_;
};

}  // namespace

RunResult run_csl_ucb_cd(const Environment& env, const UcbConfig& cfg, const CslConfig& csl,
                         const DetectorConfig& detector, int horizon, std::uint64_t seed) {
  DetectingObserver observer(env.n(), detector);
  return run_csl_ucb(env, cfg, csl, horizon, seed, &observer);
}

}  // namespace cbandit
