#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "recon/cli.hpp"
#include "recon/errors.hpp"
#include "recon/experiment.hpp"
#include "recon/oracles.hpp"

using namespace recon;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "recon");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("recon_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& row) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : row) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("csv header is fixed") {
  CHECK(csv_header() ==
        "policy,lambda,mu,param,T,seed,theta_hat,abs_theta_hat,mean_delay,mean_aoi,samples,"
        "unstable,theta_analytic,theta_lower_bound");
}

TEST_CASE("config text parsing") {
  const auto entries = parse_config_text(
      "# sweep\n"
      "policy = threshold\n"
      "lambda = 0.3, 0.5\n"
      "lambda = 0.7   # appended\n"
      "beta = 1,2,3\n"
      "horizon = 1e4\n"
      "\n");
  ExperimentSpec spec;
  apply_config(spec, entries);
  CHECK(spec.policy == "threshold");
  CHECK(spec.lambdas == std::vector<double>{0.3, 0.5, 0.7});
  CHECK(spec.betas == std::vector<int>{1, 2, 3});
  CHECK(spec.horizon == 1e4);
  CHECK_THROWS_AS(parse_config_text("lambda 0.3"), ParameterError);
  CHECK_THROWS_AS(apply_config(spec, {{"colour", "red"}}), ParameterError);
  CHECK_THROWS_AS(apply_config(spec, {{"lambda", "abc"}}), ParameterError);
}

TEST_CASE("later layers override earlier ones") {
  ExperimentSpec spec;
  apply_config(spec, parse_config_text("lambda = 0.3\nmu = 2\n"));
  apply_config(spec, {{"lambda", "0.8"}});
  CHECK(spec.lambdas == std::vector<double>{0.8});
  CHECK(spec.mus == std::vector<double>{2.0});
}

TEST_CASE("grid expansion") {
  ExperimentSpec spec;
  spec.lambdas = {0.3, 0.9};
  spec.rates = {0.2, 0.4, 0.6};
  spec.interpolations = {InterpolationMode::off, InterpolationMode::uniform_j};
  const auto grid = expand_grid(spec);
  REQUIRE(grid.size() == 12);
  CHECK(grid[0].lambda == 0.3);
  CHECK(std::get<UniformPolicy>(grid[0].policy).rate == 0.2);
  CHECK(grid[1].interpolation == InterpolationMode::uniform_j);
  CHECK(grid[11].lambda == 0.9);

  spec.lambdas.clear();
  CHECK_THROWS_AS(expand_grid(spec), ParameterError);
  spec.lambdas = {0.9};
  spec.replications = 0;
  CHECK_THROWS_AS(spec.validate(), ParameterError);
}

TEST_CASE("presets") {
  ExperimentSpec spec;
  apply_preset(spec, Preset::fig7a);
  CHECK(spec.policy == "uniform");
  CHECK(spec.rates.size() == 19);
  CHECK(spec.rates.front() == 0.05);
  CHECK(spec.rates.back() == 0.95);
  apply_preset(spec, Preset::fig9c);
  CHECK(spec.policy == "threshold");
  CHECK(spec.lambdas == std::vector<double>{1.5, 2.0, 3.0, 4.0, 5.0});
  apply_preset(spec, Preset::fig10a);
  CHECK(spec.policy == "zero_wait");
  CHECK(spec.lambdas.size() == 10);
  CHECK(spec.lambdas.back() == 2.0);
  apply_preset(spec, Preset::fig8);
  CHECK(spec.interpolations.size() == 3);
  CHECK_THROWS_AS(parse_preset("fig11"), ParameterError);
}

TEST_CASE("csv rows leave undefined fields empty") {
  RunRecord rec;
  rec.point = GridPoint{ZeroWaitPolicy{}, 0.9, 1.0, InterpolationMode::off};
  rec.theta_analytic = 1.8;
  const auto f = fields(csv_row(rec));
  REQUIRE(f.size() == 14);
  CHECK(f[0] == "zero_wait");
  CHECK(f[3].empty());
  CHECK(f[4].empty());
  CHECK(f[12] == "1.8");
  CHECK(f[13].empty());
}

TEST_CASE("zero-wait sweep grows linearly in lambda with slope 2/mu") {
  ExperimentSpec spec;
  spec.command = Command::sweep;
  apply_preset(spec, Preset::fig10a);
  spec.horizon = 1e5;
  const auto result = run_experiment(spec);
  REQUIRE(result.records.size() == 10);
  std::vector<double> x, y;
  for (const auto& rec : result.records) {
    x.push_back(rec.point.lambda);
    y.push_back(rec.report->theta_hat);
  }
  const auto fit = oracle::least_squares(x, y);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(0.03));
  CHECK(fit.r_squared > 0.999);
}

TEST_CASE("sweeps are reproducible and independent of the worker count") {
  ExperimentSpec spec;
  spec.command = Command::sweep;
  spec.rates = {0.2, 0.5};
  spec.interpolations = {InterpolationMode::off, InterpolationMode::single_point};
  spec.horizon = 2e3;
  spec.replications = 3;
  spec.workers = 3;
  const std::string a = csv_body(run_experiment(spec).records);
  const std::string b = csv_body(run_experiment(spec).records);
  spec.workers = 1;
  const std::string c = csv_body(run_experiment(spec).records);
  CHECK(a == b);
  CHECK(a == c);
  CHECK(lines(a).size() == 12);
}

TEST_CASE("each row carries its seed and a replayable hash") {
  ExperimentSpec spec;
  spec.command = Command::simulate;
  spec.horizon = 1e3;
  spec.replications = 2;
  spec.seed = 40;
  const auto result = run_experiment(spec);
  REQUIRE(result.records.size() == 2);
  CHECK(fields(csv_row(result.records[1]))[5] == "41");
  CHECK(config_hash(result.records[0]) != config_hash(result.records[1]));
  const auto summary = nlohmann::json::parse(result.summary_json);
  CHECK(summary["rows"].size() == 2);
  CHECK(summary["points"][0]["theta_analytic"].get<double>() > 0.0);

  SimConfig replay;
  replay.horizon = 1e3;
  replay.seed = 41;
  replay.policy = UniformPolicy{0.5};
  CHECK(simulate(replay).theta_hat == result.records[1].report->theta_hat);
}

TEST_CASE("unstable points are capped in the summary") {
  ExperimentSpec spec;
  spec.command = Command::sweep;
  spec.policy = "threshold";
  spec.lambdas = {2.0};
  spec.betas = {1, 3};
  spec.horizon = 1e4;
  spec.plot_ceiling = 30.0;
  const auto summary = nlohmann::json::parse(run_experiment(spec).summary_json);
  CHECK(summary["points"][0]["unstable"].get<bool>());
  CHECK(summary["points"][0]["theta_plot"].get<double>() == 30.0);
  CHECK(summary["points"][0]["theta_analytic"].is_null());
  CHECK(summary["points"][1]["theta_plot"].get<double>() < 30.0);
}

TEST_CASE("cli: artifacts and exit codes") {
  const fs::path dir = scratch("cli");
  SUBCASE("sweep writes csv and json") {
    const auto res = cli({"sweep", "fig10a", "--horizon", "1e3", "--out", dir.string()});
    CHECK(res.code == kExitOk);
    const fs::path csv = dir / "sweep_fig10a.csv";
    REQUIRE(fs::exists(csv));
    CHECK(fs::exists(dir / "sweep_fig10a.json"));
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == csv_header());
  }
  SUBCASE("empty grid is a usage error") {
    CHECK(cli({"sweep", "--lambda", "", "--out", dir.string()}).code == kExitUsage);
  }
  SUBCASE("unknown flag and missing command are usage errors") {
    CHECK(cli({"sweep", "--bogus"}).code == kExitUsage);
    CHECK(cli({}).code == kExitUsage);
    CHECK(cli({"simulate", "--interp", "cubic"}).code == kExitUsage);
  }
  SUBCASE("help exits cleanly") { CHECK(cli({"--help"}).code == kExitOk); }
  SUBCASE("instability in optimize") {
    CHECK(cli({"optimize", "--policy", "threshold", "--lambda", "2", "--beta-max", "1", "--out",
               dir.string()})
              .code == kExitNumerical);
  }
  SUBCASE("unwritable output") {
    std::ofstream(dir / "blocker") << "x";
    CHECK(cli({"analytic", "--out", (dir / "blocker" / "sub").string()}).code == kExitIo);
    CHECK(cli({"analytic", "--config", (dir / "missing.cfg").string()}).code == kExitIo);
  }
  SUBCASE("config file with flag override") {
    std::ofstream(dir / "run.cfg") << "command = analytic\nlambda = 0.3\nrate = 0.1, 0.2\n";
    const auto res = cli({"analytic", "--config", (dir / "run.cfg").string(), "--rate", "0.4",
                          "--out", dir.string()});
    CHECK(res.code == kExitOk);
    CHECK(res.out.find("lambda=0.3") != std::string::npos);
    CHECK(res.out.find("param=0.4") != std::string::npos);
    CHECK(res.out.find("param=0.1") == std::string::npos);
  }
  SUBCASE("output directory from the environment") {
    ::setenv(kOutputDirEnv, (dir / "env").string().c_str(), 1);
    CHECK(cli({"lowerbound", "--rate", "0.5"}).code == kExitOk);
    ::unsetenv(kOutputDirEnv);
    CHECK(fs::exists(dir / "env" / "lowerbound.csv"));
  }
  SUBCASE("validate subset") {
    const auto res = cli({"validate", "--only", "2,6"});
    CHECK(res.code == kExitOk);
    CHECK(res.out.find("PASS  2") != std::string::npos);
  }
  fs::remove_all(dir);
}
