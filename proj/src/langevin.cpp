#include "borngame/langevin.hpp"

#include "borngame/errors.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace borngame {

void LangevinConfig::validate() const {
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  if (!(friction >= 0.0)) throw std::invalid_argument("friction must be non-negative");
  if (!(diffusion_p >= 0.0)) throw std::invalid_argument("diffusion_p must be non-negative");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (steps < 0) throw std::invalid_argument("steps must be non-negative");
}

std::vector<std::string> LangevinConfig::warnings() const {
  std::vector<std::string> out;
  if (friction * dt > 0.1) {
    std::ostringstream msg;
    msg << "friction*dt = " << friction * dt << " > 0.1; Euler discretization is coarse";
    out.push_back(msg.str());
  }
  return out;
}

PhasePoint langevin_step(PhasePoint x, const LangevinConfig& config, double gaussian) {
  return {x.r + x.p / config.mass * config.dt,
          x.p - config.friction * x.p * config.dt + std::sqrt(2.0 * config.diffusion_p * config.dt) * gaussian};
}

PhasePoint langevin_step(PhasePoint x, const LangevinConfig& config, Rng& rng) {
  return langevin_step(x, config, rng.normal());
}

LangevinTrajectory run_langevin(const LangevinConfig& config, PhasePoint start, std::int64_t sample_every) {
  config.validate();
  if (sample_every < 1) throw std::invalid_argument("sample_every must be at least 1");
  Rng rng(config.seed);
  LangevinTrajectory traj;
  const auto kept = static_cast<std::size_t>(config.steps / sample_every + 1);
  traj.t.reserve(kept);
  traj.r.reserve(kept);
  traj.p.reserve(kept);
  auto keep = [&](std::int64_t step, PhasePoint x) {
    traj.t.push_back(static_cast<double>(step) * config.dt);
    traj.r.push_back(x.r);
    traj.p.push_back(x.p);
  };
  PhasePoint x = start;
  keep(0, x);
  for (std::int64_t step = 1; step <= config.steps; ++step) {
    x = langevin_step(x, config, rng);
    if (step % sample_every == 0) keep(step, x);
  }
  return traj;
}

namespace {

double autocorrelation(std::span<const double> p, std::size_t lag) {
  const double n = static_cast<double>(p.size());
  const double mean = std::accumulate(p.begin(), p.end(), 0.0) / n;
  double c0 = 0.0;
  for (double v : p) c0 += (v - mean) * (v - mean);
  if (c0 == 0.0) throw InsufficientData("constant series has no autocorrelation");
  double c = 0.0;
  for (std::size_t i = 0; i + lag < p.size(); ++i) c += (p[i] - mean) * (p[i + lag] - mean);
  return c / c0;
}

}  // namespace

MeanEstimate momentum_autocorrelation(std::span<const double> p, std::int64_t lag, int batches) {
  if (lag < 0) throw std::invalid_argument("lag must be non-negative");
  if (batches < 2) throw std::invalid_argument("need at least two batches");
  const auto ulag = static_cast<std::size_t>(lag);
  const std::size_t len = p.size() / static_cast<std::size_t>(batches);
  if (len <= 10 * ulag + 1) throw InsufficientData("series too short for the requested lag");
  if (lag == 0) return {1.0, 0.0};
  std::vector<double> per_batch;
  per_batch.reserve(static_cast<std::size_t>(batches));
  for (int b = 0; b < batches; ++b) {
    per_batch.push_back(autocorrelation(p.subspan(static_cast<std::size_t>(b) * len, len), ulag));
  }
  return {autocorrelation(p, ulag), mean_estimate(per_batch).standard_error};
}

MeanEstimate stationary_momentum_variance(std::span<const double> p, int batches) {
  std::vector<double> sq(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) sq[i] = p[i] * p[i];
  return batch_mean_estimate(sq, batches);
}

}  // namespace borngame
