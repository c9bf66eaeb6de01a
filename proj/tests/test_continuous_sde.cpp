#include "borngame/continuous_sde.hpp"

#include "borngame/analysis.hpp"
#include "borngame/ensemble.hpp"
#include "borngame/errors.hpp"

#include <doctest.h>

#include <deque>

using namespace borngame;

namespace {

Vector<double> vec(std::initializer_list<double> xs) {
  Vector<double> v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

struct ScriptedDraws {
  std::deque<double> script;
  double operator()(PairIndex) {
    REQUIRE_FALSE(script.empty());
    const double x = script.front();
    script.pop_front();
    return x;
  }
};

}  // namespace

TEST_CASE("noise amplitude follows the pair sign convention") {
  const double d = 0.7;
  const double a = std::sqrt(2.0 * d);
  const auto s = make_state(vec({0.2, 0.3, 0.5}));
  CHECK(noise_amplitude(s, 0, {0, 1}, d) == doctest::Approx(a));
  CHECK(noise_amplitude(s, 1, {0, 1}, d) == doctest::Approx(-a));
  CHECK(noise_amplitude(s, 2, {0, 1}, d) == 0.0);

  const auto frozen = make_state(vec({0.4, 0.0, 0.6}));
  CHECK(noise_amplitude(frozen, 0, {0, 1}, d) == 0.0);
  CHECK(noise_amplitude(frozen, 0, {0, 2}, d) == doctest::Approx(a));
  CHECK(noise_amplitude(frozen, 2, {0, 2}, d) == doctest::Approx(-a));
}

TEST_CASE("sde_step: interior transfer") {
  auto s = make_state(vec({0.3, 0.7}));
  ScriptedDraws draws{{0.01}};
  sde_step(s, draws);
  CHECK(s.values(0) == doctest::Approx(0.31).epsilon(1e-15));
  CHECK(s.values(1) == doctest::Approx(0.69).epsilon(1e-15));
  CHECK_FALSE(s.frozen.any());
}

TEST_CASE("sde_step: truncation at the absorbing boundary") {
  auto s = make_state(vec({0.05, 0.95}));
  ScriptedDraws draws{{-0.08}};
  SdeTally tally(2);
  sde_step(s, draws, &tally);
  CHECK(s.values(0) == 0.0);
  CHECK(s.values(1) == 1.0);
  CHECK(s.frozen(0));
  CHECK(terminal_outcome(s) == 1);
  CHECK(tally.truncations == 1);
  CHECK(tally.increments[0].sum == doctest::Approx(-0.05));
}

TEST_CASE("sde_step: second member truncated") {
  auto s = make_state(vec({0.9, 0.1}));
  ScriptedDraws draws{{0.25}};
  sde_step(s, draws);
  CHECK(s.values(0) == 1.0);
  CHECK(s.values(1) == 0.0);
  CHECK(s.frozen(1));
}

TEST_CASE("sde_step: three components, pairwise antisymmetric transfers") {
  auto s = make_state(vec({0.2, 0.3, 0.5}));
  ScriptedDraws draws{{0.01, -0.02, 0.005}};
  sde_step(s, draws);
  CHECK(s.values(0) == doctest::Approx(0.19).epsilon(1e-14));
  CHECK(s.values(1) == doctest::Approx(0.295).epsilon(1e-14));
  CHECK(s.values(2) == doctest::Approx(0.515).epsilon(1e-14));
  CHECK(std::abs(s.total() - 1.0) <= 3 * std::numeric_limits<double>::epsilon());
}

TEST_CASE("sde_step: a component frozen mid-step is skipped by later pairs") {
  auto s = make_state(vec({0.01, 0.49, 0.5}));
  ScriptedDraws draws{{-0.5, 0.1}};  // pair {1,2} empties 1; only {2,3} remains
  sde_step(s, draws);
  CHECK(draws.script.empty());
  CHECK(s.frozen(0));
  CHECK(s.values(1) == doctest::Approx(0.6));
  CHECK(s.values(2) == doctest::Approx(0.4));
}

TEST_CASE("run_sde degenerate start") {
  ContinuousConfig cfg;
  cfg.initial = vec({1.0, 0.0});
  const auto t = run_sde(cfg);
  CHECK(t.outcome == 0);
  CHECK(t.tau == 0.0);
  CHECK(t.steps == 0);
}

TEST_CASE("run_sde step cap") {
  ContinuousConfig cfg;
  cfg.initial = vec({0.5, 0.5});
  cfg.dt = 1e-8;
  cfg.max_steps = 10;
  CHECK_THROWS_AS(run_sde(cfg), BudgetExceeded);
}

TEST_CASE("config validation and warnings") {
  ContinuousConfig cfg;
  cfg.initial = vec({0.3, 0.7});
  cfg.diffusion = 1.0;
  cfg.dt = 1e-4;  // step sd ~0.0141 <= 0.075
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.warnings().empty());
  cfg.dt = 0.01;  // step sd ~0.141
  CHECK(cfg.warnings().size() == 1);
  cfg.diffusion = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.diffusion = 1.0;
  cfg.initial = vec({0.3, 0.8});
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("property: invariants hold along random trajectories") {
  Rng seeds(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(seeds.uniform_int(2, 5));
    Vector<double> w(n);
    for (int i = 0; i < n; ++i) w(i) = 0.05 + seeds.uniform01();
    w /= w.sum();
    ContinuousConfig cfg;
    cfg.initial = w;
    cfg.diffusion = 0.5;
    cfg.dt = 1e-4;
    Rng rng(seeds.next_u64());
    auto s = make_state(cfg.initial);
    SdeTally tally(n);
    Index frozen = 0;
    while (!is_terminal(s)) {
      sde_step(s, cfg, rng, &tally);
      REQUIRE(satisfies_invariants(s, 1.0, 1e-9));
      REQUIRE(s.frozen.count() >= frozen);
      frozen = s.frozen.count();
    }
    CHECK(tally.max_trace_drift <= 1e-12);
  }
}

TEST_CASE("symmetric SDE hits each side half the time") {
  ContinuousConfig cfg;
  cfg.initial = vec({0.5, 0.5});
  cfg.diffusion = 1.0;
  cfg.dt = 0.0125 * 0.0125 / 2.0;
  cfg.seed = 31;
  const auto trajs = run_continuous_ensemble(cfg, 100'000, 0);
  const auto stats = summarize(trajs, 2);
  CHECK(binomial_deviation_se(stats.wins(0), stats.runs, 0.5) <= 4.0);
  CHECK(std::abs(stats.martingale_z(0)) <= 4.0);
  for (const auto& t : trajs) REQUIRE(t.tally.max_trace_drift <= 1e-9);
}

TEST_CASE("mean stopping time of the two-component SDE is x(1-x)/(2D)") {
  // Brownian difference with variance 2D per unit time started at x.
  ContinuousConfig cfg;
  cfg.initial = vec({0.3, 0.7});
  cfg.diffusion = 0.5;
  cfg.dt = 2.5e-5;  // step sd 0.005
  cfg.seed = 4;
  const auto stats = summarize(run_continuous_ensemble(cfg, 20'000, 0), 2);
  const double expected = 0.3 * 0.7 / (2.0 * cfg.diffusion);
  // Discrete-time overshoot shortens tau by O(step sd); allow 2%.
  CHECK(std::abs(stats.tau_mean - expected) <= 4.0 * stats.tau_standard_error() + 0.02 * expected);
}

TEST_CASE("increments stay unbiased with and without boundary contact") {
  const double sd = 0.0125;
  ContinuousConfig cfg;
  cfg.diffusion = 1.0;
  cfg.dt = sd * sd / 2.0;

  // Reference ensemble: ten steps from the centre never reach a boundary.
  cfg.initial = vec({0.5, 0.5});
  std::vector<ContinuousTrajectory> interior(20'000);
  for (std::size_t i = 0; i < interior.size(); ++i) {
    Rng rng(substream_seed(17, i));
    auto s = make_state(cfg.initial);
    interior[i].outcome = 0;
    interior[i].tally = SdeTally(2);
    for (int step = 0; step < 10; ++step) sde_step(s, cfg, rng, &interior[i].tally);
    REQUIRE(interior[i].tally.truncations == 0);
  }
  CHECK(std::abs(martingale_test(interior, 0)) <= 4.0);

  // Starts near the boundary: every run ends in a truncated step.
  cfg.initial = vec({0.1, 0.9});
  cfg.seed = 18;
  const auto near = run_continuous_ensemble(cfg, 5'000, 0);
  CHECK(std::abs(martingale_test(near, 0)) <= 4.0);
  CHECK(std::abs(martingale_test(near, 1)) <= 4.0);
}
