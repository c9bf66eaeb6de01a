#pragma once

#include "borngame/rng.hpp"
#include "borngame/simplex_state.hpp"
#include "borngame/tally.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace borngame {

/// Pairwise-noise SDE on the simplex.
///
/// `diffusion` is a diffusion coefficient: each active pair exchanges an
/// increment of variance 2 * diffusion * dt per step, i.e. the noise amplitude
/// is sqrt(2 * diffusion). With this convention a dice game of quantum 1/N0
/// and round time dt matches diffusion = (1/N0)^2 / (2 dt) exactly.
struct ContinuousConfig {
  Vector<double> initial;
  double diffusion = 1.0;
  double dt = 1e-4;
  std::uint64_t seed = 0;
  std::int64_t max_steps = 1'000'000'000;
  double step_fraction = 0.25;  // step_sd should stay below this fraction of the smallest nonzero start

  [[nodiscard]] int n() const noexcept { return static_cast<int>(initial.size()); }
  [[nodiscard]] double step_sd() const { return std::sqrt(2.0 * diffusion * dt); }

  void validate() const;
  /// Human-readable notes about settings that degrade boundary accuracy.
  [[nodiscard]] std::vector<std::string> warnings() const;
};

/// sigma^{ii}_{kl}: +sqrt(2D) for i = k, -sqrt(2D) for i = l, zero otherwise
/// or when either member of the pair is frozen.
double noise_amplitude(const ProbabilityState& state, int component, PairIndex pair, double diffusion);

/// Per-step bookkeeping filled in by sde_step.
struct SdeTally {
  std::vector<IncrementTally> increments;  // net change per step of each component active at step start
  std::int64_t truncations = 0;            // steps cut short at the absorbing boundary
  double max_trace_drift = 0.0;            // max |sum - 1| after any step

  explicit SdeTally(Index n = 0) : increments(static_cast<std::size_t>(n)) {}
};

/// One Euler step. Pairs are processed in lexicographic order; `draw(pair)`
/// returns the transfer x for an active pair, applied as +x to k and -x to l.
/// A transfer that would drive a member below zero is cut at the amount that
/// empties it, the member is frozen and the rest of the draw is dropped.
template <typename DrawSource>
void sde_step(ProbabilityState& state, DrawSource&& draw, SdeTally* tally = nullptr) {
  const int n = static_cast<int>(state.size());
  const Vector<double> before = state.values;
  const Mask active_before = !state.frozen;
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      const PairIndex pair{k, l};
      if (!state.pair_active(pair)) continue;
      const double x = draw(pair);
      double& vk = state.values(k);
      double& vl = state.values(l);
      if (vk + x <= 0.0) {
        vl += vk;
        vk = 0.0;
        state.frozen(k) = true;
        if (tally) ++tally->truncations;
      } else if (vl - x <= 0.0) {
        vk += vl;
        vl = 0.0;
        state.frozen(l) = true;
        if (tally) ++tally->truncations;
      } else {
        vk += x;
        vl -= x;
      }
    }
  }
  if (tally) {
    for (int i = 0; i < n; ++i) {
      if (active_before(i)) tally->increments[i].add(state.values(i) - before(i));
    }
    tally->max_trace_drift = std::max(tally->max_trace_drift, std::abs(state.total() - 1.0));
  }
}

void sde_step(ProbabilityState& state, const ContinuousConfig& config, Rng& rng, SdeTally* tally = nullptr);

struct ContinuousSample {
  double time = 0.0;
  Vector<double> values;
};

struct ContinuousTrajectory {
  int outcome = -1;
  std::int64_t steps = 0;
  double tau = 0.0;  // steps * dt
  SdeTally tally;
  std::vector<ContinuousSample> samples;

  [[nodiscard]] double stopping_time() const noexcept { return tau; }
  [[nodiscard]] const std::vector<IncrementTally>& increments() const noexcept { return tally.increments; }
};

/// Steps until a single component holds everything; that component is then
/// set to exactly 1.
ContinuousTrajectory run_sde(const ContinuousConfig& config, Rng& rng, std::int64_t sample_every = 0);
ContinuousTrajectory run_sde(const ContinuousConfig& config, std::int64_t sample_every = 0);

}  // namespace borngame
