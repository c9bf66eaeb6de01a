#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using borngame::cli::ExitCode;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"borngame"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = borngame::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("borngame_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("run: discrete ensemble writes summary and passes") {
  const auto dir = scratch_dir("discrete");
  const auto prefix = (dir / "d").string();
  const auto r = invoke({"run", "--engine", "discrete", "--fortunes", "2,3,5", "--runs", "20000", "--seed", "7",
                         "--out", prefix, "--format", "csv,json"});
  CHECK(r.code == ExitCode::kOk);
  CHECK(r.out.find("verdict: PASS") != std::string::npos);
  const auto csv = slurp(prefix + ".summary.csv");
  CHECK(csv.rfind("gambler,wins,runs,frequency,wilson_low,wilson_high\n", 0) == 0);
  const auto j = nlohmann::json::parse(slurp(prefix + ".summary.json"));
  CHECK(j.at("runs") == 20000);
  CHECK(j.at("metadata").at("generator") == "mt19937_64");
  CHECK(j.at("verdict").at("all_pass") == true);
  CHECK_FALSE(fs::exists(prefix + ".trajectories.jsonl"));
}

TEST_CASE("run: continuous ensemble") {
  const auto dir = scratch_dir("continuous");
  const auto prefix = (dir / "c").string();
  const auto r = invoke({"run", "--engine", "continuous", "--initial", "0.5,0.5", "--diffusion", "1", "--dt",
                         "7.8125e-05", "--runs", "10000", "--seed", "3", "--out", prefix});
  CHECK(r.code == ExitCode::kOk);
  CHECK(r.out.find("verdict: PASS") != std::string::npos);
  CHECK(fs::exists(prefix + ".summary.csv"));
}

TEST_CASE("run: trajectory dumps when sampling") {
  const auto dir = scratch_dir("samples");
  const auto prefix = (dir / "s").string();
  const auto r = invoke({"run", "--fortunes", "1,2", "--runs", "5", "--sample-every", "1", "--out", prefix});
  CHECK((r.code == ExitCode::kOk || r.code == ExitCode::kVerdictFail));
  std::ifstream in(prefix + ".trajectories.jsonl");
  int lines = 0;
  for (std::string line; std::getline(in, line); ++lines) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("outcome"));
    CHECK(j.contains("samples"));
    CHECK(j.at("index") == lines);
  }
  CHECK(lines == 5);
}

TEST_CASE("run: zero runs is rejected with an empty summary") {
  const auto dir = scratch_dir("zero");
  const auto r = invoke({"run", "--fortunes", "1,1", "--runs", "0", "--out", (dir / "z").string()});
  CHECK(r.code == ExitCode::kConfigError);
  CHECK(r.out == "gambler,wins,runs,frequency,wilson_low,wilson_high\n1,0,0,0,0,0\n2,0,0,0,0,0\n");
}

TEST_CASE("config file with flag overrides") {
  const auto dir = scratch_dir("config");
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"engine": "discrete", "fortunes": [1, 1], "runs": 5, "seed": 1, "format": "json",
                            "out": ")" << (dir / "f").string() << R"("})";
  const auto r = invoke({"run", "--config", cfg.string(), "--runs", "300"});
  CHECK(r.code == ExitCode::kOk);
  const auto j = nlohmann::json::parse(slurp(dir / "f.summary.json"));
  CHECK(j.at("runs") == 300);
  CHECK_FALSE(fs::exists(dir / "f.summary.csv"));
}

TEST_CASE("config errors exit with 2") {
  const auto dir = scratch_dir("errors");
  std::ofstream(dir / "bad.json") << "{ not json";
  std::ofstream(dir / "typo.json") << R"({"fortune": [1, 1]})";
  CHECK(invoke({"run", "--config", (dir / "bad.json").string()}).code == ExitCode::kConfigError);
  CHECK(invoke({"run", "--config", (dir / "typo.json").string()}).code == ExitCode::kConfigError);
  CHECK(invoke({"run", "--config", (dir / "missing.json").string()}).code == ExitCode::kConfigError);
  CHECK(invoke({"run", "--engine", "quantum", "--fortunes", "1,1"}).code == ExitCode::kConfigError);
  CHECK(invoke({"run", "--fortunes", "0,0"}).code == ExitCode::kConfigError);
  CHECK(invoke({"run", "--engine", "continuous", "--initial", "0.5,0.6"}).code == ExitCode::kConfigError);
  CHECK(invoke({"run", "--fortunes", "1,1", "--format", "xml"}).code == ExitCode::kConfigError);
  CHECK(invoke({"bogus"}).code == ExitCode::kConfigError);
}

TEST_CASE("budget exceeded exits with 3") {
  const auto dir = scratch_dir("budget");
  const auto r = invoke({"run", "--fortunes", "50,50", "--max-rounds", "2", "--runs", "3", "--out",
                         (dir / "b").string()});
  CHECK(r.code == ExitCode::kBudgetExceeded);
}

TEST_CASE("unwritable output exits with 4") {
  const auto r = invoke({"run", "--fortunes", "1,1", "--runs", "10", "--out", "/nonexistent-dir/x/y"});
  CHECK(r.code == ExitCode::kIoError);
}

TEST_CASE("oracle subcommand") {
  const auto dir = scratch_dir("oracle");
  const auto prefix = (dir / "o").string();
  auto r = invoke({"oracle", "--fortunes", "3,7", "--out", prefix});
  CHECK(r.code == ExitCode::kOk);
  auto j = nlohmann::json::parse(slurp(prefix + ".oracle.json"));
  CHECK(j.at("max_abs_difference").get<double>() <= 1e-10);
  CHECK(j.at("chain") == "scheduled");

  r = invoke({"oracle", "--fortunes", "1,1,1", "--out", prefix});
  CHECK(r.code == ExitCode::kOk);
  j = nlohmann::json::parse(slurp(prefix + ".oracle.json"));
  for (const auto& p : j.at("absorption_prob")) CHECK(p.get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  r = invoke({"oracle", "--fortunes", "2,3,5", "--reduced", "--out", prefix});
  CHECK(r.code == ExitCode::kOk);
  j = nlohmann::json::parse(slurp(prefix + ".oracle.json"));
  CHECK(j.at("chain") == "reduced");
  CHECK(j.at("max_abs_difference").get<double>() <= 1e-10);

  r = invoke({"oracle", "--fortunes", "20,20,20,20,20,20", "--out", prefix});
  CHECK(r.code == ExitCode::kBudgetExceeded);
}

TEST_CASE("compare subcommand") {
  const auto dir = scratch_dir("compare");
  const auto prefix = (dir / "cmp").string();
  auto r = invoke({"compare", "--n0", "2", "--fortunes", "1,1", "--runs", "2000", "--seed", "4", "--out", prefix,
                   "--format", "csv,json"});
  CHECK(r.code == ExitCode::kOk);
  const auto csv = slurp(prefix + ".compare.csv");
  CHECK(csv.rfind("quantity,index,reference,discrete,", 0) == 0);
  CHECK(csv.find("mean_stopping_time") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(prefix + ".compare.json"));
  CHECK(j.at("diffusion").get<double>() == doctest::Approx(0.25 / (2.0 * 1e-3)));

  r = invoke({"compare", "--n0", "5", "--fortunes", "1,1", "--out", prefix});
  CHECK(r.code == ExitCode::kConfigError);
}

TEST_CASE("langevin subcommand") {
  const auto dir = scratch_dir("langevin");
  const auto prefix = (dir / "l").string();
  const auto r = invoke({"langevin", "--steps", "200000", "--seed", "2", "--sample-every", "1000", "--out", prefix});
  CHECK((r.code == ExitCode::kOk || r.code == ExitCode::kVerdictFail));
  CHECK(r.out.find("<p^2>") != std::string::npos);
  const auto csv = slurp(prefix + ".langevin.csv");
  CHECK(csv.rfind("t,r,p\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 202);
}

TEST_CASE("artifacts are byte-identical across worker counts") {
  const auto dir = scratch_dir("determinism");
  const auto a = (dir / "a").string();
  const auto b = (dir / "b").string();
  for (const auto& [prefix, workers] : {std::pair{a, "1"}, std::pair{b, "5"}}) {
    const auto r = invoke({"run", "--engine", "continuous", "--initial", "0.2,0.3,0.5", "--diffusion", "1", "--dt",
                           "1e-4", "--runs", "500", "--seed", "99", "--workers", workers, "--out", prefix,
                           "--format", "csv,json"});
    CHECK(r.err.empty());
  }
  CHECK(slurp(a + ".summary.csv") == slurp(b + ".summary.csv"));
  CHECK(slurp(a + ".summary.json") == slurp(b + ".summary.json"));
}
