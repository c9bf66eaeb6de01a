#include "borngame/langevin.hpp"

#include "borngame/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace borngame;

TEST_CASE("free streaming without friction or noise") {
  LangevinConfig cfg{1.0, 0.0, 0.0, 0.1, 1, 0};
  const auto x = langevin_step({2.0, 1.0}, cfg, 0.37);
  CHECK(x.p == 1.0);
  CHECK(x.r == doctest::Approx(2.1));
}

TEST_CASE("position update uses p / M") {
  LangevinConfig cfg{4.0, 0.0, 0.0, 0.5, 1, 0};
  const auto x = langevin_step({0.0, 2.0}, cfg, 0.0);
  CHECK(x.r == doctest::Approx(0.25));
}

TEST_CASE("deterministic decay converges to exp(-alpha t) at first order") {
  for (double dt : {1e-2, 1e-3, 1e-4}) {
    LangevinConfig cfg{1.0, 1.0, 0.0, dt, static_cast<std::int64_t>(std::llround(1.0 / dt)), 0};
    const auto traj = run_langevin(cfg, {0.0, 1.0});
    const double err = std::abs(traj.p.back() - std::exp(-1.0));
    CHECK(err <= dt);
    CHECK(err >= 0.1 * dt);  // genuinely first order, not exact
  }
}

TEST_CASE("stationary Ornstein-Uhlenbeck statistics") {
  LangevinConfig cfg{1.0, 1.0, 1.0, 0.01, 1'000'000, 21};
  CHECK(cfg.warnings().empty());
  const auto traj = run_langevin(cfg, {0.0, 0.0});
  const std::span<const double> p(traj.p.data() + 1000, traj.p.size() - 1000);
  const auto var = stationary_momentum_variance(p);
  CHECK(std::abs(var.mean - 1.0) <= 4.0 * var.standard_error);

  const auto ac0 = momentum_autocorrelation(p, 0);
  CHECK(ac0.mean == 1.0);
  const auto ac = momentum_autocorrelation(p, 100);
  CHECK(std::abs(ac.mean - std::exp(-1.0)) <= 4.0 * ac.standard_error);
  const auto far = momentum_autocorrelation(p, 1500);
  CHECK(std::abs(far.mean) <= 4.0 * far.standard_error);
}

TEST_CASE("autocorrelation needs enough data") {
  std::vector<double> p(100, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::sin(static_cast<double>(i));
  CHECK_THROWS_AS(momentum_autocorrelation(p, 50), InsufficientData);
}

TEST_CASE("coarse steps are flagged") {
  LangevinConfig cfg{1.0, 20.0, 1.0, 0.01, 10, 0};
  CHECK(cfg.warnings().size() == 1);
  cfg.mass = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
