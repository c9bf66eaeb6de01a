#include "borngame/continuum_check.hpp"

#include "borngame/ensemble.hpp"

#include <cmath>

namespace borngame {

bool ContinuumComparison::mutually_consistent() const {
  return (joint_z.array() <= kZ95).all();
}

bool ContinuumComparison::consistent_with_prediction() const {
  for (Index i = 0; i < prediction.size(); ++i) {
    if (!Interval{discrete.wilson_low(i), discrete.wilson_high(i)}.contains(prediction(i))) return false;
    if (!Interval{continuous.wilson_low(i), continuous.wilson_high(i)}.contains(prediction(i))) return false;
  }
  return true;
}

ContinuumComparison discrete_continuum_check(const Vector<std::int64_t>& fortunes0, double round_dt,
                                             const ContinuumCheckOptions& options) {
  if (!(round_dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(options.max_step_sd > 0.0)) throw std::invalid_argument("max_step_sd must be positive");
  DiscreteGameConfig game{fortunes0, options.dice_faces, options.seed};
  game.validate();
  if (game.total() < 2) throw std::invalid_argument("N0 must be at least 2");

  ContinuumComparison out;
  out.total = game.total();
  out.round_dt = round_dt;
  const double quantum = game.quantum();
  out.diffusion = quantum * quantum / (2.0 * round_dt);
  // Per-round sd of the SDE equals the quantum; split rounds until the
  // per-step sd is within bounds.
  out.substeps = static_cast<std::int64_t>(std::ceil(std::pow(quantum / options.max_step_sd, 2) - 1e-9));
  out.substeps = std::max<std::int64_t>(out.substeps, 1);
  out.sde_dt = round_dt / static_cast<double>(out.substeps);
  out.prediction = born_rule_prediction(fortunes0);

  ContinuousConfig sde;
  sde.initial = out.prediction;
  sde.diffusion = out.diffusion;
  sde.dt = out.sde_dt;
  // Distinct stream family from the discrete ensemble.
  sde.seed = splitmix64(options.seed ^ 0x636f6e74696e7575ULL);

  const int n = game.n();
  const auto discrete = run_discrete_ensemble(game, options.runs, options.workers);
  const auto continuous = run_continuous_ensemble(sde, options.runs, options.workers);
  out.discrete = summarize(discrete, n);
  out.continuous = summarize(continuous, n);

  const double dmean = out.discrete.tau_mean * round_dt;
  const double dse = out.discrete.tau_standard_error() * round_dt;
  out.discrete_tau_ci = {dmean - kZ95 * dse, dmean + kZ95 * dse};
  const double cmean = out.continuous.tau_mean;
  const double cse = out.continuous.tau_standard_error();
  out.continuous_tau_ci = {cmean - kZ95 * cse, cmean + kZ95 * cse};

  out.joint_z.resize(n);
  const double runs = static_cast<double>(options.runs);
  for (int i = 0; i < n; ++i) {
    const double pd = out.discrete.freq(i);
    const double pc = out.continuous.freq(i);
    const double se = std::sqrt(pd * (1.0 - pd) / runs + pc * (1.0 - pc) / runs);
    const double diff = std::abs(pd - pc);
    out.joint_z(i) = se == 0.0 ? (diff == 0.0 ? 0.0 : INFINITY) : diff / se;
  }
  return out;
}

}  // namespace borngame
