#include "borngame/report.hpp"

#include "borngame/ensemble.hpp"

#include <doctest.h>

using namespace borngame;

TEST_CASE("format_number round-trips") {
  CHECK(format_number(0.3) == "0.3");
  CHECK(format_number(1.0) == "1");
  CHECK(std::stod(format_number(0.1 + 0.2)) == 0.1 + 0.2);
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("state JSON round trip") {
  Vector<double> v(3);
  v << 0.25, 0.0, 0.75;
  auto s = make_state(v);
  s.time = 1.5;
  const auto j = to_json(s);
  CHECK(j.at("values").size() == 3);
  CHECK(j.at("frozen")[1] == true);
  CHECK(j.at("time") == 1.5);
  const auto back = probability_state_from_json(j);
  CHECK(back.values == s.values);
  CHECK((back.frozen == s.frozen).all());
  CHECK(back.time == 1.5);

  nlohmann::json bad = j;
  bad["frozen"][0] = true;
  CHECK_THROWS_AS(probability_state_from_json(bad), std::invalid_argument);
}

TEST_CASE("summary CSV layout") {
  Vector<std::int64_t> f(2);
  f << 1, 1;
  const auto trajs = run_discrete_ensemble({f, 6, 1}, 100, 1);
  const auto csv = summary_csv(summarize(trajs, 2));
  CHECK(csv.rfind("gambler,wins,runs,frequency,wilson_low,wilson_high\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.find("\n1,") != std::string::npos);
  CHECK(csv.find("\n2,") != std::string::npos);
}

TEST_CASE("trajectory JSON uses one-based outcomes") {
  Vector<std::int64_t> f(2);
  f << 2, 0;
  const auto t = run_game({f, 6, 1}, 1);
  const auto j = to_json(t);
  CHECK(j.at("outcome") == 1);
  CHECK(j.at("rounds") == 0);
  CHECK(j.contains("samples"));
}

TEST_CASE("exact solution JSON") {
  ExactSolution sol;
  sol.absorption_prob = Vector<double>::Constant(2, 0.5);
  sol.expected_rounds = 1.0;
  sol.expected_duels = 1.0;
  const auto j = to_json(sol);
  CHECK(j.at("absorption_prob")[0] == 0.5);
  CHECK(j.at("expected_rounds") == 1.0);
  sol.expected_rounds.reset();
  CHECK(to_json(sol).at("expected_rounds").is_null());
}
