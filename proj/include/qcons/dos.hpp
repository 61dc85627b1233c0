#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace qcons {

/// One DoS interval H_q = {h} U [h, h + tau).
struct DosInterval {
  double start{0};     // h_q, seconds
  double duration{0};  // tau_q >= 0, seconds; 0 is a single pulse at h_q

  double end() const { return start + duration; }
  bool operator==(const DosInterval&) const = default;
};

/// Ordered, disjoint DoS intervals over [0, horizon].
class DosSignal {
 public:
  DosSignal() = default;
  /// Throws InvalidParams if intervals are unsorted, overlapping, start
  /// before `first_sample`, or have negative duration.
  DosSignal(std::vector<DosInterval> intervals, double horizon, double first_sample = 0.0);

  const std::vector<DosInterval>& intervals() const { return intervals_; }
  double horizon() const { return horizon_; }
  bool empty() const { return intervals_.empty(); }

 private:
  std::vector<DosInterval> intervals_;
  double horizon_{0};
};

/// Frequency (eta, tau_d) and duration (kappa, T) constraints. Infinite
/// tau_d / T denote "no attacks of this kind".
struct DosBudget {
  double eta{0};
  double tau_d{std::numeric_limits<double>::infinity()};
  double kappa{0};
  double T{std::numeric_limits<double>::infinity()};

  /// 1/T + delta/tau_d
  double level(double delta) const { return 1.0 / T + delta / tau_d; }
};

struct DosMeasure {
  std::int64_t transitions{0};  // n(tau, t): starts h_q in the closed window
  double jammed_time{0};        // |Xi(tau, t)|
};

inline constexpr double kTimeTolerance = 1e-9;

/// Whether sample instant k*delta lies inside some H_q.
bool is_jammed(const DosSignal& sig, std::int64_t k, double delta);

DosMeasure measure(const DosSignal& sig, double tau, double t);

/// Exact check of both constraints over all windows [tau, t] with endpoints in
/// {delta, horizon} U {h_q} U {h_q + tau_q}.
bool verify_budget(const DosSignal& sig, const DosBudget& b, double delta);

/// Smallest eta and kappa for which verify_budget holds at the given rates.
DosBudget tight_budget(const DosSignal& sig, double tau_d, double T, double delta);

struct AveragedDos {
  double tau_d_avg{0};
  double one_over_T_avg{0};
};

/// horizon / n(0, horizon) and |Xi(0, horizon)| / horizon. Throws NoAttacks.
AveragedDos averaged_params(const DosSignal& sig);

/// Alternating exponential off/on dwell times with means
/// mean_period*(1-duty) and mean_period*duty; deterministic in `seed`.
DosSignal generate_random(std::uint64_t seed, double horizon, double delta, double target_duty,
                          double mean_period);

/// (1 - 1/T - delta/tau_d) k - (kappa + eta delta) / delta. Throws BudgetTooLarge.
double lemma1_lower_bound(std::int64_t k, double delta, const DosBudget& b);

/// Longest run of consecutive jammed sample instants k = 1..floor(horizon/delta).
std::int64_t max_consecutive_losses(const DosSignal& sig, double delta, double horizon);

/// Number of non-jammed sample instants among k = 1..k_end.
std::int64_t successful_transmissions(const DosSignal& sig, double delta, std::int64_t k_end);

std::int64_t sample_count(double horizon, double delta);

}  // namespace qcons
