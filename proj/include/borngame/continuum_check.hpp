#pragma once

#include "borngame/analysis.hpp"
#include "borngame/continuous_sde.hpp"
#include "borngame/discrete_game.hpp"

#include <cstdint>

namespace borngame {

struct ContinuumCheckOptions {
  std::int64_t runs = 10'000;
  int workers = 0;
  std::uint64_t seed = 0;
  int dice_faces = 6;
  /// Upper bound on the per-pair SDE step sd. The SDE is integrated with
  /// round_dt / substeps, substeps chosen so the bound holds.
  double max_step_sd = 0.0125;
};

/// Discrete game and SDE run side by side under D = dq^2 / (2 round_dt),
/// dq = 1 / N0. Stopping times are both reported in units of time
/// (discrete rounds * round_dt).
struct ContinuumComparison {
  std::int64_t total = 0;
  double round_dt = 0.0;
  double diffusion = 0.0;
  double sde_dt = 0.0;
  std::int64_t substeps = 1;
  Vector<double> prediction;
  EnsembleStats discrete;
  EnsembleStats continuous;
  Interval discrete_tau_ci;    // time units
  Interval continuous_tau_ci;  // time units
  Vector<double> joint_z;      // |p_d - p_c| / sqrt(se_d^2 + se_c^2)

  /// Frequencies agree with each other within joint 95% bounds.
  [[nodiscard]] bool mutually_consistent() const;
  /// Both Wilson 95% intervals contain the Born-rule prediction.
  [[nodiscard]] bool consistent_with_prediction() const;
};

ContinuumComparison discrete_continuum_check(const Vector<std::int64_t>& fortunes0, double round_dt,
                                             const ContinuumCheckOptions& options = {});

}  // namespace borngame
