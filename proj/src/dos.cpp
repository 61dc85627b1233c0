#include "qcons/dos.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qcons/error.hpp"

namespace qcons {

DosSignal::DosSignal(std::vector<DosInterval> intervals, double horizon, double first_sample)
    : intervals_(std::move(intervals)), horizon_(horizon) {
  if (!std::isfinite(horizon) || horizon < 0) throw Error(ErrorCode::InvalidParams, "horizon must be finite and >= 0");
  for (std::size_t q = 0; q < intervals_.size(); ++q) {
    auto& iv = intervals_[q];
    if (!std::isfinite(iv.start) || !std::isfinite(iv.duration) || iv.duration < 0) {
      throw Error(ErrorCode::InvalidParams, "DoS interval " + std::to_string(q) + " is malformed");
    }
    if (iv.start < first_sample - kTimeTolerance) {
      throw Error(ErrorCode::InvalidParams, "DoS interval " + std::to_string(q) + " starts before the first sample");
    }
    if (iv.start > horizon) {
      throw Error(ErrorCode::InvalidParams, "DoS interval " + std::to_string(q) + " starts after the horizon");
    }
    if (q > 0 && !(iv.start > intervals_[q - 1].end())) {
      throw Error(ErrorCode::InvalidParams, "DoS intervals must be sorted and disjoint (interval " + std::to_string(q) + ")");
    }
    iv.duration = std::min(iv.duration, horizon - iv.start);
  }
}

bool is_jammed(const DosSignal& sig, std::int64_t k, double delta) {
  const double t = static_cast<double>(k) * delta;
  const auto& ivs = sig.intervals();
  auto it = std::upper_bound(ivs.begin(), ivs.end(), t + kTimeTolerance,
                             [](double value, const DosInterval& iv) { return value < iv.start; });
  if (it == ivs.begin()) return false;
  const DosInterval& iv = *std::prev(it);
  return t < iv.end() - kTimeTolerance || t <= iv.start + kTimeTolerance;
}

namespace {

// Prefix view of a signal supporting O(log Q) window measurements.
class SignalIndex {
 public:
  explicit SignalIndex(const DosSignal& sig) : ivs_(sig.intervals()) {
    starts_.reserve(ivs_.size());
    prefix_.reserve(ivs_.size() + 1);
    prefix_.push_back(0.0);
    for (const auto& iv : ivs_) {
      starts_.push_back(iv.start);
      prefix_.push_back(prefix_.back() + iv.duration);
    }
  }

  std::int64_t transitions(double tau, double t) const {
    auto lo = std::lower_bound(starts_.begin(), starts_.end(), tau);
    auto hi = std::upper_bound(starts_.begin(), starts_.end(), t);
    return hi > lo ? hi - lo : 0;
  }

  double jammed_time(double tau, double t) const { return std::max(0.0, cumulative(t) - cumulative(tau)); }

 private:
  // |Xi(0, x)|
  double cumulative(double x) const {
    auto it = std::upper_bound(starts_.begin(), starts_.end(), x);
    const auto q = static_cast<std::size_t>(it - starts_.begin());
    if (q == 0) return 0.0;
    const DosInterval& last = ivs_[q - 1];
    return prefix_[q - 1] + std::min(last.duration, x - last.start);
  }

  const std::vector<DosInterval>& ivs_;
  std::vector<double> starts_;
  std::vector<double> prefix_;
};

std::vector<double> window_endpoints(const DosSignal& sig, double delta) {
  std::vector<double> pts{delta, sig.horizon()};
  for (const auto& iv : sig.intervals()) {
    pts.push_back(iv.start);
    pts.push_back(iv.end());
  }
  std::erase_if(pts, [&](double p) { return p < delta || p > sig.horizon(); });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

struct Excess {
  double frequency{0};  // max n - len/tau_d
  double duration{0};   // max |Xi| - len/T
};

Excess worst_excess(const DosSignal& sig, double tau_d, double T, double delta) {
  Excess worst;
  if (sig.empty()) return worst;
  const SignalIndex index(sig);
  const auto pts = window_endpoints(sig, delta);
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a; b < pts.size(); ++b) {
      const double len = pts[b] - pts[a];
      const double n = static_cast<double>(index.transitions(pts[a], pts[b]));
      worst.frequency = std::max(worst.frequency, n - len / tau_d);
      worst.duration = std::max(worst.duration, index.jammed_time(pts[a], pts[b]) - len / T);
    }
  }
  return worst;
}

}  // namespace

DosMeasure measure(const DosSignal& sig, double tau, double t) {
  const SignalIndex index(sig);
  return {index.transitions(tau, t), index.jammed_time(tau, t)};
}

bool verify_budget(const DosSignal& sig, const DosBudget& b, double delta) {
  constexpr double kSlack = 1e-12;
  const Excess e = worst_excess(sig, b.tau_d, b.T, delta);
  return e.frequency <= b.eta + kSlack && e.duration <= b.kappa + kSlack;
}

DosBudget tight_budget(const DosSignal& sig, double tau_d, double T, double delta) {
  if (!(tau_d > 0) || !(T > 1)) throw Error(ErrorCode::InvalidParams, "budget needs tau_d > 0 and T > 1");
  const Excess e = worst_excess(sig, tau_d, T, delta);
  return {std::max(0.0, e.frequency), tau_d, std::max(0.0, e.duration), T};
}

AveragedDos averaged_params(const DosSignal& sig) {
  const auto m = measure(sig, 0.0, sig.horizon());
  if (m.transitions == 0 || !(sig.horizon() > 0)) throw Error(ErrorCode::NoAttacks, "signal has no DoS transitions");
  return {sig.horizon() / static_cast<double>(m.transitions), m.jammed_time / sig.horizon()};
}

namespace {

// Portable exponential draw: the standard distributions are not
// bit-reproducible across library implementations.
double exponential(std::mt19937_64& rng, double mean) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
  return -mean * std::log1p(-u);
}

}  // namespace

DosSignal generate_random(std::uint64_t seed, double horizon, double delta, double target_duty,
                          double mean_period) {
  if (!(target_duty > 0 && target_duty < 1) || !(mean_period > delta) || !(delta > 0) ||
      !std::isfinite(horizon) || horizon < 0) {
    throw Error(ErrorCode::InvalidParams, "generate_random needs 0 < duty < 1, mean_period > delta > 0");
  }
  std::mt19937_64 rng(seed);
  const double off_mean = mean_period * (1.0 - target_duty);
  const double on_mean = mean_period * target_duty;
  std::vector<DosInterval> ivs;
  double t = delta;
  bool first = true;
  while (true) {
    double off = exponential(rng, off_mean);
    if (!first && off <= 0) off = std::numeric_limits<double>::min();
    first = false;
    const double start = t + off;
    if (start >= horizon) break;
    const double on = std::min(exponential(rng, on_mean), horizon - start);
    ivs.push_back({start, on});
    t = start + on;
    if (t >= horizon) break;
  }
  // Successive starts can coincide with the previous end only through a
  // zero-length off draw, which was nudged above.
  return DosSignal(std::move(ivs), horizon, delta);
}

double lemma1_lower_bound(std::int64_t k, double delta, const DosBudget& b) {
  const double level = b.level(delta);
  if (!(level < 1.0)) throw Error(ErrorCode::BudgetTooLarge, "1/T + delta/tau_d must be < 1");
  return (1.0 - level) * static_cast<double>(k) - (b.kappa + b.eta * delta) / delta;
}

std::int64_t sample_count(double horizon, double delta) {
  return static_cast<std::int64_t>(std::floor(horizon / delta + 1e-9));
}

std::int64_t max_consecutive_losses(const DosSignal& sig, double delta, double horizon) {
  std::int64_t best = 0;
  std::int64_t run = 0;
  const std::int64_t steps = sample_count(horizon, delta);
  for (std::int64_t k = 1; k <= steps; ++k) {
    run = is_jammed(sig, k, delta) ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

std::int64_t successful_transmissions(const DosSignal& sig, double delta, std::int64_t k_end) {
  std::int64_t count = 0;
  for (std::int64_t k = 1; k <= k_end; ++k) {
    if (!is_jammed(sig, k, delta)) ++count;
  }
  return count;
}

}  // namespace qcons
