#include "borngame/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace borngame {

namespace {

nlohmann::json number_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

template <typename Scalar>
nlohmann::json vector_json(const Vector<Scalar>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) {
    if constexpr (std::is_floating_point_v<Scalar>) {
      out.push_back(number_or_null(v(i)));
    } else {
      out.push_back(v(i));
    }
  }
  return out;
}

nlohmann::json tally_json(const std::vector<IncrementTally>& tallies) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : tallies) out.push_back({{"count", t.count}, {"sum", t.sum}, {"sum_sq", t.sum_sq}});
  return out;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return ec == std::errc{} ? std::string(buf.data(), end) : std::string("nan");
}

ProbabilityState probability_state_from_json(const nlohmann::json& j) {
  const auto values = j.at("values").get<std::vector<double>>();
  const auto frozen = j.at("frozen").get<std::vector<bool>>();
  if (values.size() != frozen.size()) throw std::invalid_argument("values/frozen length mismatch");
  ProbabilityState state = make_state(Vector<double>(Eigen::Map<const Vector<double>>(values.data(), static_cast<Index>(values.size()))));
  for (std::size_t i = 0; i < frozen.size(); ++i) {
    if (frozen[i] && values[i] != 0.0) throw std::invalid_argument("frozen component must be zero");
    state.frozen(static_cast<Index>(i)) = state.frozen(static_cast<Index>(i)) || frozen[i];
  }
  state.time = j.value("time", 0.0);
  return state;
}

nlohmann::json to_json(const DiscreteTrajectory& traj) {
  nlohmann::json j{{"outcome", traj.outcome + 1},
                   {"rounds", traj.rounds},
                   {"clocks", traj.tally.clocks},
                   {"increments", tally_json(traj.tally.increments)}};
  if (!traj.samples.empty()) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : traj.samples) samples.push_back({{"round", s.round}, {"fortunes", vector_json(s.fortunes)}});
    j["samples"] = samples;
  }
  return j;
}

nlohmann::json to_json(const ContinuousTrajectory& traj) {
  nlohmann::json j{{"outcome", traj.outcome + 1},
                   {"steps", traj.steps},
                   {"stopping_time", traj.tau},
                   {"truncations", traj.tally.truncations},
                   {"max_trace_drift", traj.tally.max_trace_drift},
                   {"increments", tally_json(traj.tally.increments)}};
  if (!traj.samples.empty()) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : traj.samples) samples.push_back({{"time", s.time}, {"values", vector_json(s.values)}});
    j["samples"] = samples;
  }
  return j;
}

nlohmann::json to_json(const ExactSolution& solution) {
  nlohmann::json j{{"absorption_prob", vector_json(solution.absorption_prob)},
                   {"expected_duels", solution.expected_duels},
                   {"states", solution.states},
                   {"residual", solution.residual}};
  j["expected_rounds"] = solution.expected_rounds ? nlohmann::json(*solution.expected_rounds) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const EnsembleStats& stats) {
  return {{"runs", stats.runs},
          {"wins", vector_json(stats.wins)},
          {"freq", vector_json(stats.freq)},
          {"wilson_low", vector_json(stats.wilson_low)},
          {"wilson_high", vector_json(stats.wilson_high)},
          {"tau_mean", stats.tau_mean},
          {"tau_var", stats.tau_var},
          {"increment_count", vector_json(stats.increment_count)},
          {"martingale_z", vector_json(stats.martingale_z)},
          {"stopped_mean", vector_json(stats.stopped_mean)}};
}

std::string summary_csv(const EnsembleStats& stats) {
  std::ostringstream out;
  out << "gambler,wins,runs,frequency,wilson_low,wilson_high\n";
  for (Index i = 0; i < stats.wins.size(); ++i) {
    out << i + 1 << ',' << stats.wins(i) << ',' << stats.runs << ',' << format_number(stats.freq(i)) << ','
        << format_number(stats.wilson_low(i)) << ',' << format_number(stats.wilson_high(i)) << '\n';
  }
  return out.str();
}

std::string comparison_csv(const ContinuumComparison& cmp) {
  std::ostringstream out;
  out << "quantity,index,reference,discrete,discrete_low,discrete_high,continuous,continuous_low,continuous_high,"
         "joint_z\n";
  for (Index i = 0; i < cmp.prediction.size(); ++i) {
    out << "hit_probability," << i + 1 << ',' << format_number(cmp.prediction(i)) << ','
        << format_number(cmp.discrete.freq(i)) << ',' << format_number(cmp.discrete.wilson_low(i)) << ','
        << format_number(cmp.discrete.wilson_high(i)) << ',' << format_number(cmp.continuous.freq(i)) << ','
        << format_number(cmp.continuous.wilson_low(i)) << ',' << format_number(cmp.continuous.wilson_high(i)) << ','
        << format_number(cmp.joint_z(i)) << '\n';
  }
  const double dmean = cmp.discrete.tau_mean * cmp.round_dt;
  const double dse = cmp.discrete.tau_standard_error() * cmp.round_dt;
  const double cse = cmp.continuous.tau_standard_error();
  const double joint = std::sqrt(dse * dse + cse * cse);
  const double tz = joint > 0.0 ? std::abs(dmean - cmp.continuous.tau_mean) / joint : 0.0;
  out << "mean_stopping_time,," << "," << format_number(dmean) << ',' << format_number(cmp.discrete_tau_ci.low) << ','
      << format_number(cmp.discrete_tau_ci.high) << ',' << format_number(cmp.continuous.tau_mean) << ','
      << format_number(cmp.continuous_tau_ci.low) << ',' << format_number(cmp.continuous_tau_ci.high) << ','
      << format_number(tz) << '\n';
  return out.str();
}

std::string langevin_csv(const LangevinTrajectory& traj) {
  std::ostringstream out;
  out << "t,r,p\n";
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    out << format_number(traj.t[i]) << ',' << format_number(traj.r[i]) << ',' << format_number(traj.p[i]) << '\n';
  }
  return out.str();
}

std::string verdict_csv(const EnsembleStats& stats, const Verdict& verdict) {
  std::ostringstream out;
  out << "gambler,prediction,frequency,deviation,tolerance,verdict\n";
  for (Index i = 0; i < verdict.prediction.size(); ++i) {
    out << i + 1 << ',' << format_number(verdict.prediction(i)) << ',' << format_number(stats.freq(i)) << ','
        << format_number(verdict.deviation(i)) << ',' << format_number(verdict.tolerance(i)) << ','
        << (verdict.pass[static_cast<std::size_t>(i)] ? "PASS" : "FAIL") << '\n';
  }
  return out.str();
}

}  // namespace borngame
