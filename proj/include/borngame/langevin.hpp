#pragma once

#include "borngame/analysis.hpp"
#include "borngame/rng.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace borngame {

/// dr = (p / M) dt,  dp = -alpha p dt + sqrt(2 D_p) dB.
struct LangevinConfig {
  double mass = 1.0;
  double friction = 1.0;     // alpha, 1/time
  double diffusion_p = 1.0;  // D_p, momentum^2/time
  double dt = 0.01;
  std::int64_t steps = 1'000'000;
  std::uint64_t seed = 0;

  void validate() const;
  [[nodiscard]] std::vector<std::string> warnings() const;
};

struct PhasePoint {
  double r = 0.0;
  double p = 0.0;
};

/// Euler-Maruyama step with a supplied standard normal draw.
PhasePoint langevin_step(PhasePoint x, const LangevinConfig& config, double gaussian);
PhasePoint langevin_step(PhasePoint x, const LangevinConfig& config, Rng& rng);

struct LangevinTrajectory {
  std::vector<double> t;
  std::vector<double> r;
  std::vector<double> p;
};

/// Integrates `config.steps` steps from `start`, keeping every
/// `sample_every`-th point (the start point is always kept).
LangevinTrajectory run_langevin(const LangevinConfig& config, PhasePoint start = {}, std::int64_t sample_every = 1);

/// Normalized autocorrelation of p at `lag` samples, with a batch-means
/// standard error. Exactly 1 at lag 0.
MeanEstimate momentum_autocorrelation(std::span<const double> p, std::int64_t lag, int batches = 50);

/// <p^2> over the series with a batch-means standard error.
MeanEstimate stationary_momentum_variance(std::span<const double> p, int batches = 50);

}  // namespace borngame
