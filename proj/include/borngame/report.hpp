#pragma once

#include "borngame/analysis.hpp"
#include "borngame/continuous_sde.hpp"
#include "borngame/continuum_check.hpp"
#include "borngame/discrete_game.hpp"
#include "borngame/exact_chain.hpp"
#include "borngame/langevin.hpp"
#include "borngame/simplex_state.hpp"

#include <json.hpp>

#include <string>

// Report formats. Component/gambler indices are one-based in every artifact.

namespace borngame {

/// Shortest round-trip decimal form; "nan"/"inf"/"-inf" for non-finite.
std::string format_number(double x);

template <typename Scalar>
nlohmann::json to_json(const DiagonalState<Scalar>& state) {
  nlohmann::json values = nlohmann::json::array();
  nlohmann::json frozen = nlohmann::json::array();
  for (Index i = 0; i < state.size(); ++i) {
    values.push_back(state.values(i));
    frozen.push_back(static_cast<bool>(state.frozen(i)));
  }
  return {{"values", values}, {"frozen", frozen}, {"time", state.time}};
}

/// Inverse of to_json for the real-valued state; validates invariants.
ProbabilityState probability_state_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DiscreteTrajectory& traj);
nlohmann::json to_json(const ContinuousTrajectory& traj);
nlohmann::json to_json(const ExactSolution& solution);
nlohmann::json to_json(const EnsembleStats& stats);

/// Columns: gambler,wins,runs,frequency,wilson_low,wilson_high
std::string summary_csv(const EnsembleStats& stats);

/// Columns: quantity,index,reference,discrete,discrete_low,discrete_high,
///          continuous,continuous_low,continuous_high,joint_z
std::string comparison_csv(const ContinuumComparison& cmp);

/// Columns: t,r,p
std::string langevin_csv(const LangevinTrajectory& traj);

/// Columns: gambler,prediction,frequency,deviation,tolerance,verdict
std::string verdict_csv(const EnsembleStats& stats, const Verdict& verdict);

}  // namespace borngame
