#pragma once

#include "borngame/errors.hpp"
#include "borngame/simplex_state.hpp"
#include "borngame/tally.hpp"

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace borngame {

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;
/// Pass threshold for stochastic checks, in standard errors.
inline constexpr double kPassSigmas = 4.0;

struct Interval {
  double low = 0.0;
  double high = 0.0;
  [[nodiscard]] bool contains(double x) const noexcept { return low <= x && x <= high; }
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = kZ95);

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Sample mean and its i.i.d. standard error.
MeanEstimate mean_estimate(std::span<const double> xs);

/// Mean with standard error from non-overlapping batch means, for
/// autocorrelated series.
MeanEstimate batch_mean_estimate(std::span<const double> xs, int batches);

/// N^i_0 / N0 for each gambler.
Vector<double> born_rule_prediction(const Vector<std::int64_t>& fortunes0);

/// Distance of a binomial frequency from p in units of sqrt(p(1-p)/runs).
/// Returns 0 for an exact match at p in {0, 1} and +inf for any other
/// deviation there.
double binomial_deviation_se(std::int64_t successes, std::int64_t runs, double p);

template <typename T>
concept TrajectoryLike = requires(const T& t) {
  { t.outcome } -> std::convertible_to<int>;
  { t.stopping_time() } -> std::convertible_to<double>;
  { t.increments() } -> std::same_as<const std::vector<IncrementTally>&>;
};

/// Pooled mean increment of `component` over every step it was active,
/// divided by its standard error. |z| <= 4 is a pass.
template <TrajectoryLike Traj>
double martingale_test(const std::vector<Traj>& trajectories, int component,
                       std::int64_t min_increments = 1000) {
  IncrementTally pooled;
  for (const auto& t : trajectories) {
    const auto& inc = t.increments();
    if (component < 0 || static_cast<std::size_t>(component) >= inc.size()) {
      throw std::out_of_range("martingale_test: component out of range");
    }
    pooled += inc[static_cast<std::size_t>(component)];
  }
  if (pooled.count < min_increments) {
    throw InsufficientData("component " + std::to_string(component + 1) + " has only " +
                           std::to_string(pooled.count) + " active increments");
  }
  const double count = static_cast<double>(pooled.count);
  const double mean = pooled.sum / count;
  const double var = std::max(0.0, (pooled.sum_sq - count * mean * mean) / (count - 1.0));
  const double se = std::sqrt(var / count);
  if (se == 0.0) return mean == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), mean);
  return mean / se;
}

struct StoppingReport {
  std::int64_t runs = 0;
  Vector<double> stopped_mean;    // ensemble mean of each component at tau
  Vector<double> standard_error;  // binomial SE under the initial value
  Vector<double> deviation_se;    // |stopped_mean - initial| / SE
  [[nodiscard]] bool passes(double sigmas = kPassSigmas) const {
    return (deviation_se.array() <= sigmas).all();
  }
};

/// At tau every component is 0 or 1, so its stopped mean is the win fraction.
template <TrajectoryLike Traj>
StoppingReport optional_stopping_check(const std::vector<Traj>& trajectories, const Vector<double>& initial) {
  const Index n = initial.size();
  Vector<std::int64_t> wins = Vector<std::int64_t>::Zero(n);
  for (const auto& t : trajectories) {
    if (t.outcome < 0 || t.outcome >= n) throw std::invalid_argument("non-terminal trajectory in ensemble");
    ++wins(t.outcome);
  }
  const auto runs = static_cast<std::int64_t>(trajectories.size());
  if (runs == 0) throw InsufficientData("empty ensemble");
  StoppingReport report;
  report.runs = runs;
  report.stopped_mean = wins.cast<double>() / static_cast<double>(runs);
  report.standard_error.resize(n);
  report.deviation_se.resize(n);
  for (Index i = 0; i < n; ++i) {
    report.standard_error(i) = std::sqrt(initial(i) * (1.0 - initial(i)) / static_cast<double>(runs));
    report.deviation_se(i) = binomial_deviation_se(wins(i), runs, initial(i));
  }
  return report;
}

struct EnsembleStats {
  std::int64_t runs = 0;
  Vector<std::int64_t> wins;
  Vector<double> freq;
  Vector<double> wilson_low;
  Vector<double> wilson_high;
  double tau_mean = 0.0;
  double tau_var = 0.0;  // unbiased sample variance
  Vector<std::int64_t> increment_count;
  Vector<double> martingale_z;  // NaN where a component has too few increments
  Vector<double> stopped_mean;

  [[nodiscard]] double tau_standard_error() const {
    return runs > 0 ? std::sqrt(tau_var / static_cast<double>(runs)) : 0.0;
  }
};

/// Reduces an ensemble in trajectory-index order, so results do not depend
/// on how the trajectories were produced.
template <TrajectoryLike Traj>
EnsembleStats summarize(const std::vector<Traj>& trajectories, int n, std::int64_t min_increments = 1000) {
  EnsembleStats s;
  s.runs = static_cast<std::int64_t>(trajectories.size());
  s.wins = Vector<std::int64_t>::Zero(n);
  s.increment_count = Vector<std::int64_t>::Zero(n);
  double tau_sum = 0.0;
  for (const auto& t : trajectories) {
    if (t.outcome < 0 || t.outcome >= n) throw std::invalid_argument("non-terminal trajectory in ensemble");
    ++s.wins(t.outcome);
    tau_sum += t.stopping_time();
    for (int i = 0; i < n; ++i) s.increment_count(i) += t.increments()[static_cast<std::size_t>(i)].count;
  }
  s.freq = Vector<double>::Zero(n);
  s.wilson_low = Vector<double>::Zero(n);
  s.wilson_high = Vector<double>::Zero(n);
  s.martingale_z = Vector<double>::Constant(n, std::numeric_limits<double>::quiet_NaN());
  if (s.runs == 0) {
    s.stopped_mean = s.freq;
    return s;
  }
  const double runs = static_cast<double>(s.runs);
  s.tau_mean = tau_sum / runs;
  double sq = 0.0;
  for (const auto& t : trajectories) {
    const double d = t.stopping_time() - s.tau_mean;
    sq += d * d;
  }
  s.tau_var = s.runs > 1 ? sq / (runs - 1.0) : 0.0;
  for (int i = 0; i < n; ++i) {
    s.freq(i) = static_cast<double>(s.wins(i)) / runs;
    const Interval ci = wilson_interval(s.wins(i), s.runs);
    s.wilson_low(i) = ci.low;
    s.wilson_high(i) = ci.high;
    if (s.increment_count(i) >= min_increments) s.martingale_z(i) = martingale_test(trajectories, i, min_increments);
  }
  s.stopped_mean = s.freq;
  return s;
}

/// Per-component verdict of frequencies against a predicted vector:
/// pass when |freq - p| <= sigmas * sqrt(p(1-p)/runs) + allowance.
struct Verdict {
  Vector<double> prediction;
  Vector<double> deviation;
  Vector<double> tolerance;
  std::vector<bool> pass;
  [[nodiscard]] bool all_pass() const {
    for (bool b : pass) {
      if (!b) return false;
    }
    return !pass.empty();
  }
};

Verdict compare_to_prediction(const EnsembleStats& stats, const Vector<double>& prediction,
                              double allowance = 0.0, double sigmas = kPassSigmas);

}  // namespace borngame
