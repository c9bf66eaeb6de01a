#include "borngame/continuous_sde.hpp"

#include "borngame/errors.hpp"

#include <sstream>

namespace borngame {

void ContinuousConfig::validate() const {
  if (!(diffusion > 0.0) || !std::isfinite(diffusion)) throw std::invalid_argument("diffusion must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be positive");
  if (!(step_fraction > 0.0)) throw std::invalid_argument("step_fraction must be positive");
  (void)make_state(initial);
}

std::vector<std::string> ContinuousConfig::warnings() const {
  std::vector<std::string> out;
  double smallest = 1.0;
  for (Index i = 0; i < initial.size(); ++i) {
    if (initial(i) > 0.0) smallest = std::min(smallest, initial(i));
  }
  if (step_sd() > step_fraction * smallest) {
    std::ostringstream msg;
    msg << "step sd " << step_sd() << " exceeds " << step_fraction << " x smallest nonzero initial component ("
        << smallest << "); boundary hitting will be coarse";
    out.push_back(msg.str());
  }
  return out;
}

double noise_amplitude(const ProbabilityState& state, int component, PairIndex pair, double diffusion) {
  if (!state.pair_active(pair)) return 0.0;
  const double a = std::sqrt(2.0 * diffusion);
  if (component == pair.k) return a;
  if (component == pair.l) return -a;
  return 0.0;
}

void sde_step(ProbabilityState& state, const ContinuousConfig& config, Rng& rng, SdeTally* tally) {
  const double sd = config.step_sd();
  sde_step(state, [&](PairIndex) { return sd * rng.normal(); }, tally);
  state.time += config.dt;
}

ContinuousTrajectory run_sde(const ContinuousConfig& config, Rng& rng, std::int64_t sample_every) {
  config.validate();
  ProbabilityState state = make_state(config.initial);
  ContinuousTrajectory traj;
  traj.tally = SdeTally(state.size());
  if (sample_every > 0) traj.samples.push_back({0.0, state.values});

  std::int64_t steps = 0;
  while (!is_terminal(state)) {
    if (steps >= config.max_steps) {
      throw BudgetExceeded("SDE exceeded " + std::to_string(config.max_steps) + " steps");
    }
    sde_step(state, config, rng, &traj.tally);
    ++steps;
    if (sample_every > 0 && steps % sample_every == 0 && !is_terminal(state)) {
      traj.samples.push_back({static_cast<double>(steps) * config.dt, state.values});
    }
  }
  traj.outcome = *terminal_outcome(state);
  state.values(traj.outcome) = 1.0;
  traj.steps = steps;
  traj.tau = static_cast<double>(steps) * config.dt;
  if (sample_every > 0) traj.samples.push_back({traj.tau, state.values});
  return traj;
}

ContinuousTrajectory run_sde(const ContinuousConfig& config, std::int64_t sample_every) {
  Rng rng(config.seed);
  return run_sde(config, rng, sample_every);
}

}  // namespace borngame
