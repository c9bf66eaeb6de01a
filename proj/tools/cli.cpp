#include "cli.hpp"

#include "borngame/analysis.hpp"
#include "borngame/continuous_sde.hpp"
#include "borngame/continuum_check.hpp"
#include "borngame/discrete_game.hpp"
#include "borngame/ensemble.hpp"
#include "borngame/errors.hpp"
#include "borngame/exact_chain.hpp"
#include "borngame/langevin.hpp"
#include "borngame/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace borngame::cli {

namespace {

using nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "engine",  "fortunes",  "initial",     "diffusion", "dt",         "dice_faces", "max_rounds",
      "max_steps", "step_fraction", "runs", "workers",   "seed",       "sample_every", "out",
      "format",  "allowance", "n0",          "max_step_sd", "mass",     "friction",   "diffusion_p",
      "steps",   "lag",       "burn_in",     "max_states", "reduced"};
  return keys;
}

json load_settings(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json settings;
  try {
    settings = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  if (!settings.is_object()) throw ConfigError("config file must hold a flat JSON object");
  for (const auto& [key, value] : settings.items()) {
    if (!known_keys().contains(key)) throw ConfigError("unknown config key '" + key + "'");
    if (value.is_object()) throw ConfigError("config key '" + key + "' must not be nested");
  }
  return settings;
}

template <typename T>
T get(const json& s, const std::string& key, T fallback) {
  if (!s.contains(key)) return fallback;
  try {
    return s.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

template <typename T>
Vector<T> get_vector(const json& s, const std::string& key) {
  if (!s.contains(key)) throw ConfigError("missing required setting '" + key + "'");
  const auto v = get<std::vector<T>>(s, key, {});
  return Eigen::Map<const Vector<T>>(v.data(), static_cast<Index>(v.size()));
}

std::set<std::string> formats_of(const json& s) {
  std::set<std::string> out;
  if (!s.contains("format")) return {"csv"};
  std::vector<std::string> parts;
  if (s.at("format").is_array()) {
    parts = get<std::vector<std::string>>(s, "format", {});
  } else {
    std::stringstream ss(get<std::string>(s, "format", "csv"));
    for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  }
  for (const auto& p : parts) {
    if (p != "csv" && p != "json") throw ConfigError("unknown format '" + p + "' (expected csv and/or json)");
    out.insert(p);
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file << contents;
  if (!file) throw IoError("failed writing " + path);
}

json metadata(std::uint64_t seed) {
  return {{"generator", kGeneratorFamily},
          {"seed_derivation", kSeedDerivation},
          {"sampler_version", kSamplerVersion},
          {"master_seed", seed}};
}

template <typename Scalar>
json vec_json(const Vector<Scalar>& v) {
  return std::vector<Scalar>(v.data(), v.data() + v.size());
}

/// Flags shared by every subcommand. Anything given on the command line
/// overrides the config file.
struct Flags {
  std::string config;
  std::optional<std::string> engine;
  std::vector<std::int64_t> fortunes;
  std::vector<double> initial;
  std::optional<double> diffusion, dt, allowance, max_step_sd, mass, friction, diffusion_p, lag, step_fraction;
  std::optional<std::int64_t> runs, sample_every, n0, steps, max_rounds, max_steps, burn_in, max_states;
  std::optional<int> workers, dice_faces;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, format;
  bool reduced = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "Flat JSON config file");
    app->add_option("--engine", engine, "discrete | continuous | langevin");
    app->add_option("--fortunes", fortunes, "Initial integer fortunes, e.g. 2,3,5")->delimiter(',');
    app->add_option("--initial", initial, "Initial simplex point, e.g. 0.3,0.7")->delimiter(',');
    app->add_option("--diffusion", diffusion, "SDE diffusion coefficient D");
    app->add_option("--dt", dt, "Time step");
    app->add_option("--dice-faces", dice_faces, "Faces per die");
    app->add_option("--max-rounds", max_rounds, "Round cap of the dice game");
    app->add_option("--max-steps", max_steps, "Step cap of the SDE");
    app->add_option("--step-fraction", step_fraction, "SDE step-size warning threshold");
    app->add_option("--runs", runs, "Ensemble size");
    app->add_option("--seed", seed, "Master seed (u64)");
    app->add_option("--workers", workers, "Worker threads (0 = auto)");
    app->add_option("--sample-every", sample_every, "Trajectory decimation (0 = outcomes only)");
    app->add_option("--out", out, "Output path prefix");
    app->add_option("--format", format, "Comma-separated subset of csv,json");
    app->add_option("--allowance", allowance, "Extra verdict tolerance on frequencies");
    app->add_option("--n0", n0, "Total number of money quanta N0");
    app->add_option("--max-step-sd", max_step_sd, "Per-step sd bound for the SDE in compare");
    app->add_option("--mass", mass, "Langevin mass M");
    app->add_option("--friction", friction, "Langevin friction alpha");
    app->add_option("--diffusion-p", diffusion_p, "Langevin momentum diffusion D_p");
    app->add_option("--steps", steps, "Langevin step count");
    app->add_option("--lag", lag, "Autocorrelation lag (time units)");
    app->add_option("--burn-in", burn_in, "Langevin steps discarded before statistics");
    app->add_option("--max-states", max_states, "Oracle state-space bound");
    app->add_flag("--reduced", reduced, "Oracle: use the reduced chain (no schedule position)");
  }

  json merged() const {
    json s = load_settings(config);
    auto put = [&](const char* key, const auto& v) {
      if (v) s[key] = *v;
    };
    put("engine", engine);
    if (!fortunes.empty()) s["fortunes"] = fortunes;
    if (!initial.empty()) s["initial"] = initial;
    put("diffusion", diffusion);
    put("dt", dt);
    put("dice_faces", dice_faces);
    put("max_rounds", max_rounds);
    put("max_steps", max_steps);
    put("step_fraction", step_fraction);
    put("runs", runs);
    put("seed", seed);
    put("workers", workers);
    put("sample_every", sample_every);
    put("out", out);
    put("format", format);
    put("allowance", allowance);
    put("n0", n0);
    put("max_step_sd", max_step_sd);
    put("mass", mass);
    put("friction", friction);
    put("diffusion_p", diffusion_p);
    put("steps", steps);
    put("lag", lag);
    put("burn_in", burn_in);
    put("max_states", max_states);
    if (reduced) s["reduced"] = true;
    return s;
  }
};

DiscreteGameConfig discrete_config(const json& s) {
  DiscreteGameConfig c;
  c.fortunes0 = get_vector<std::int64_t>(s, "fortunes");
  c.dice_faces = get<int>(s, "dice_faces", 6);
  c.seed = get<std::uint64_t>(s, "seed", 0);
  c.max_rounds = get<std::int64_t>(s, "max_rounds", c.max_rounds);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

ContinuousConfig continuous_config(const json& s) {
  ContinuousConfig c;
  c.initial = get_vector<double>(s, "initial");
  c.diffusion = get<double>(s, "diffusion", c.diffusion);
  c.dt = get<double>(s, "dt", c.dt);
  c.seed = get<std::uint64_t>(s, "seed", 0);
  c.max_steps = get<std::int64_t>(s, "max_steps", c.max_steps);
  c.step_fraction = get<double>(s, "step_fraction", c.step_fraction);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

void print_verdict(std::ostream& out, const EnsembleStats& stats, const Verdict& verdict) {
  out << std::left << std::setw(9) << "gambler" << std::setw(12) << "predicted" << std::setw(12) << "frequency"
      << std::setw(26) << "wilson95" << std::setw(14) << "martingale_z" << "verdict\n";
  for (Index i = 0; i < stats.freq.size(); ++i) {
    std::ostringstream ci;
    ci << '[' << std::fixed << std::setprecision(5) << stats.wilson_low(i) << ", " << stats.wilson_high(i) << ']';
    std::ostringstream z;
    if (std::isnan(stats.martingale_z(i))) {
      z << "n/a";
    } else {
      z << std::fixed << std::setprecision(2) << stats.martingale_z(i);
    }
    out << std::left << std::setw(9) << i + 1 << std::setw(12) << format_number(verdict.prediction(i))
        << std::setw(12) << format_number(stats.freq(i)) << std::setw(26) << ci.str() << std::setw(14) << z.str()
        << (verdict.pass[static_cast<std::size_t>(i)] ? "PASS" : "FAIL") << '\n';
  }
  out << "verdict: " << (verdict.all_pass() ? "PASS" : "FAIL") << '\n';
}

int cmd_langevin(const json& s, std::ostream& out, std::ostream& err);

int cmd_run(const json& s, std::ostream& out, std::ostream& err) {
  const auto engine = get<std::string>(s, "engine", "discrete");
  if (engine == "langevin") return cmd_langevin(s, out, err);
  if (engine != "discrete" && engine != "continuous") throw ConfigError("unknown engine '" + engine + "'");

  const auto runs = get<std::int64_t>(s, "runs", 10'000);
  const auto workers = get<int>(s, "workers", 0);
  const auto sample_every = get<std::int64_t>(s, "sample_every", 0);
  const auto prefix = get<std::string>(s, "out", "borngame");
  const auto formats = formats_of(s);
  if (sample_every < 0) throw ConfigError("sample_every must be non-negative");
  if (workers < 0) throw ConfigError("workers must be non-negative");

  json config_json;
  Vector<double> prediction;
  EnsembleStats stats;
  StoppingReport stopping;
  std::vector<std::string> lines;
  double allowance = 0.0;
  std::uint64_t seed = 0;

  if (engine == "discrete") {
    const auto cfg = discrete_config(s);
    seed = cfg.seed;
    prediction = born_rule_prediction(cfg.fortunes0);
    if (runs <= 0) {
      out << summary_csv(summarize(std::vector<DiscreteTrajectory>{}, cfg.n()));
      throw ConfigError("runs must be positive");
    }
    allowance = get<double>(s, "allowance", 0.0);
    config_json = {{"fortunes", vec_json(cfg.fortunes0)},
                   {"dice_faces", cfg.dice_faces},
                   {"max_rounds", cfg.max_rounds}};
    const auto trajs = run_discrete_ensemble(cfg, runs, workers, sample_every);
    stats = summarize(trajs, cfg.n());
    stopping = optional_stopping_check(trajs, prediction);
    if (sample_every > 0) {
      for (std::size_t i = 0; i < trajs.size(); ++i) {
        json j = to_json(trajs[i]);
        j["index"] = i;
        lines.push_back(j.dump());
      }
    }
  } else {
    const auto cfg = continuous_config(s);
    seed = cfg.seed;
    prediction = cfg.initial;
    for (const auto& w : cfg.warnings()) err << "warning: " << w << '\n';
    if (runs <= 0) {
      out << summary_csv(summarize(std::vector<ContinuousTrajectory>{}, cfg.n()));
      throw ConfigError("runs must be positive");
    }
    allowance = get<double>(s, "allowance", 0.01);
    config_json = {{"initial", vec_json(cfg.initial)},
                   {"diffusion", cfg.diffusion},
                   {"dt", cfg.dt},
                   {"amplitude_convention", "pair increment variance 2*diffusion*dt"},
                   {"max_steps", cfg.max_steps}};
    const auto trajs = run_continuous_ensemble(cfg, runs, workers, sample_every);
    stats = summarize(trajs, cfg.n());
    stopping = optional_stopping_check(trajs, prediction);
    if (sample_every > 0) {
      for (std::size_t i = 0; i < trajs.size(); ++i) {
        json j = to_json(trajs[i]);
        j["index"] = i;
        lines.push_back(j.dump());
      }
    }
  }

  const Verdict verdict = compare_to_prediction(stats, prediction, allowance);

  if (formats.contains("csv")) {
    write_file(prefix + ".summary.csv", summary_csv(stats));
    write_file(prefix + ".verdict.csv", verdict_csv(stats, verdict));
  }
  if (formats.contains("json")) {
    json pass = json::array();
    for (bool b : verdict.pass) pass.push_back(b);
    json summary{{"engine", engine},
                 {"runs", runs},
                 {"config", config_json},
                 {"metadata", metadata(seed)},
                 {"prediction", vec_json(prediction)},
                 {"allowance", allowance},
                 {"stats", to_json(stats)},
                 {"verdict", {{"deviation", vec_json(verdict.deviation)},
                              {"tolerance", vec_json(verdict.tolerance)},
                              {"pass", pass},
                              {"all_pass", verdict.all_pass()}}},
                 {"optional_stopping", {{"stopped_mean", vec_json(stopping.stopped_mean)},
                                        {"deviation_se", vec_json(stopping.deviation_se)}}}};
    write_file(prefix + ".summary.json", summary.dump(2) + "\n");
  }
  if (!lines.empty()) {
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    write_file(prefix + ".trajectories.jsonl", text);
  }

  out << "engine: " << engine << "  runs: " << runs << "  seed: " << seed << '\n';
  out << "mean stopping time: " << format_number(stats.tau_mean) << " +- "
      << format_number(stats.tau_standard_error()) << (engine == "discrete" ? " rounds" : " time units") << '\n';
  print_verdict(out, stats, verdict);
  return verdict.all_pass() ? kOk : kVerdictFail;
}

int cmd_oracle(const json& s, std::ostream& out, std::ostream&) {
  const auto cfg = discrete_config(s);
  const bool reduced = get<bool>(s, "reduced", false);
  const auto max_states = get<std::int64_t>(s, "max_states", static_cast<std::int64_t>(kDefaultMaxStates));
  if (max_states < 1) throw ConfigError("max_states must be positive");
  const auto prefix = get<std::string>(s, "out", "borngame");

  const ExactSolution sol = exact_absorption_solve(cfg, reduced ? ChainKind::reduced : ChainKind::scheduled,
                                                   static_cast<std::size_t>(max_states));
  const Vector<double> born = born_rule_prediction(cfg.fortunes0);
  const double agreement = (sol.absorption_prob - born).cwiseAbs().maxCoeff();

  json j = to_json(sol);
  j["fortunes"] = vec_json(cfg.fortunes0);
  j["chain"] = reduced ? "reduced" : "scheduled";
  j["born_rule"] = vec_json(born);
  j["max_abs_difference"] = agreement;
  write_file(prefix + ".oracle.json", j.dump(2) + "\n");

  out << "chain: " << (reduced ? "reduced" : "scheduled") << "  states: " << sol.states
      << "  residual: " << format_number(sol.residual) << '\n';
  out << std::left << std::setw(9) << "gambler" << std::setw(26) << "oracle" << "born_rule\n";
  for (Index i = 0; i < born.size(); ++i) {
    out << std::left << std::setw(9) << i + 1 << std::setw(26) << format_number(sol.absorption_prob(i))
        << format_number(born(i)) << '\n';
  }
  if (sol.expected_rounds) out << "expected rounds: " << format_number(*sol.expected_rounds) << '\n';
  out << "expected duels: " << format_number(sol.expected_duels) << '\n';
  out << "max |oracle - born_rule|: " << format_number(agreement) << '\n';
  return kOk;
}

int cmd_compare(const json& s, std::ostream& out, std::ostream&) {
  const auto fortunes = get_vector<std::int64_t>(s, "fortunes");
  if (s.contains("n0") && get<std::int64_t>(s, "n0", 0) != fortunes.sum()) {
    throw ConfigError("n0 does not match the sum of fortunes");
  }
  ContinuumCheckOptions opts;
  opts.runs = get<std::int64_t>(s, "runs", opts.runs);
  opts.workers = get<int>(s, "workers", 0);
  opts.seed = get<std::uint64_t>(s, "seed", 0);
  opts.dice_faces = get<int>(s, "dice_faces", 6);
  opts.max_step_sd = get<double>(s, "max_step_sd", opts.max_step_sd);
  const double dt = get<double>(s, "dt", 1e-3);
  const auto prefix = get<std::string>(s, "out", "borngame");
  const auto formats = formats_of(s);
  if (opts.runs <= 0) throw ConfigError("runs must be positive");

  ContinuumComparison cmp;
  try {
    cmp = discrete_continuum_check(fortunes, dt, opts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const std::string csv = comparison_csv(cmp);
  if (formats.contains("csv")) write_file(prefix + ".compare.csv", csv);
  if (formats.contains("json")) {
    json j{{"n0", cmp.total},
           {"round_dt", cmp.round_dt},
           {"diffusion", cmp.diffusion},
           {"sde_dt", cmp.sde_dt},
           {"substeps", cmp.substeps},
           {"runs", opts.runs},
           {"metadata", metadata(opts.seed)},
           {"prediction", vec_json(cmp.prediction)},
           {"discrete", to_json(cmp.discrete)},
           {"continuous", to_json(cmp.continuous)},
           {"joint_z", vec_json(cmp.joint_z)},
           {"mutually_consistent", cmp.mutually_consistent()},
           {"consistent_with_prediction", cmp.consistent_with_prediction()}};
    write_file(prefix + ".compare.json", j.dump(2) + "\n");
  }
  out << "N0: " << cmp.total << "  D: " << format_number(cmp.diffusion) << "  SDE dt: " << format_number(cmp.sde_dt)
      << " (" << cmp.substeps << " substeps per round)\n";
  out << csv;
  const bool ok = cmp.mutually_consistent() && cmp.consistent_with_prediction();
  out << "mutually consistent: " << (cmp.mutually_consistent() ? "yes" : "no")
      << "  consistent with prediction: " << (cmp.consistent_with_prediction() ? "yes" : "no") << '\n';
  out << "verdict: " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kOk : kVerdictFail;
}

int cmd_langevin(const json& s, std::ostream& out, std::ostream& err) {
  LangevinConfig cfg;
  cfg.mass = get<double>(s, "mass", cfg.mass);
  cfg.friction = get<double>(s, "friction", cfg.friction);
  cfg.diffusion_p = get<double>(s, "diffusion_p", cfg.diffusion_p);
  cfg.dt = get<double>(s, "dt", cfg.dt);
  cfg.steps = get<std::int64_t>(s, "steps", cfg.steps);
  cfg.seed = get<std::uint64_t>(s, "seed", 0);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(cfg.friction > 0.0)) throw ConfigError("friction must be positive for stationary statistics");
  for (const auto& w : cfg.warnings()) err << "warning: " << w << '\n';
  const auto sample_every = get<std::int64_t>(s, "sample_every", 0);
  if (sample_every < 0) throw ConfigError("sample_every must be non-negative");
  const auto prefix = get<std::string>(s, "out", "borngame");
  const double lag_time = get<double>(s, "lag", 1.0 / cfg.friction);
  const auto lag = static_cast<std::int64_t>(std::llround(lag_time / cfg.dt));
  const auto burn_in =
      get<std::int64_t>(s, "burn_in", static_cast<std::int64_t>(std::ceil(10.0 / (cfg.friction * cfg.dt))));
  if (burn_in < 0 || burn_in >= cfg.steps) throw ConfigError("burn_in must lie in [0, steps)");

  const auto traj = run_langevin(cfg, {}, 1);
  if (sample_every > 0 && formats_of(s).contains("csv")) {
    LangevinTrajectory kept;
    for (std::size_t i = 0; i < traj.t.size(); i += static_cast<std::size_t>(sample_every)) {
      kept.t.push_back(traj.t[i]);
      kept.r.push_back(traj.r[i]);
      kept.p.push_back(traj.p[i]);
    }
    write_file(prefix + ".langevin.csv", langevin_csv(kept));
  }
  const std::span<const double> stationary(traj.p.data() + burn_in, traj.p.size() - static_cast<std::size_t>(burn_in));
  const MeanEstimate p2 = stationary_momentum_variance(stationary);
  const double expected_p2 = cfg.diffusion_p / cfg.friction;
  out << "<p^2> = " << format_number(p2.mean) << " +- " << format_number(p2.standard_error)
      << "  (expected D_p/alpha = " << format_number(expected_p2) << ")\n";
  bool ok = std::abs(p2.mean - expected_p2) <= kPassSigmas * p2.standard_error;
  try {
    const MeanEstimate ac = momentum_autocorrelation(stationary, lag);
    const double expected_ac = std::exp(-cfg.friction * static_cast<double>(lag) * cfg.dt);
    out << "autocorrelation(lag " << format_number(static_cast<double>(lag) * cfg.dt)
        << ") = " << format_number(ac.mean) << " +- " << format_number(ac.standard_error)
        << "  (expected " << format_number(expected_ac) << ")\n";
    ok = ok && std::abs(ac.mean - expected_ac) <= kPassSigmas * ac.standard_error;
  } catch (const InsufficientData& e) {
    err << "warning: " << e.what() << '\n';
  }
  out << "verdict: " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kOk : kVerdictFail;
}

}  // namespace

int run(int argc, const char* const argv[], std::ostream& out, std::ostream& err) {
  CLI::App app{"Gambler's-ruin simulator for Born-rule statistics"};
  app.require_subcommand(1);
  Flags flags;
  auto* run_cmd = app.add_subcommand("run", "Simulate an ensemble and compare with the Born rule");
  auto* oracle_cmd = app.add_subcommand("oracle", "Solve the dice game exactly as an absorbing Markov chain");
  auto* compare_cmd = app.add_subcommand("compare", "Discrete game vs SDE under the continuum-limit relation");
  auto* langevin_cmd = app.add_subcommand("langevin", "Classical Langevin reference integrator");
  for (auto* sub : {run_cmd, oracle_cmd, compare_cmd, langevin_cmd}) flags.attach(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const json settings = flags.merged();
    if (*run_cmd) return cmd_run(settings, out, err);
    if (*oracle_cmd) return cmd_oracle(settings, out, err);
    if (*compare_cmd) return cmd_compare(settings, out, err);
    return cmd_langevin(settings, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kBudgetExceeded;
  } catch (const StateSpaceTooLarge& e) {
    err << "state space too large: " << e.what() << '\n';
    return kBudgetExceeded;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBudgetExceeded;
  }
}

}  // namespace borngame::cli
