#include "recon/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "recon/errors.hpp"
#include "recon/experiment.hpp"
#include "recon/validation.hpp"

namespace recon {

namespace {

// Every flag is kept as text and funnelled through the config-file parser, so the
// file and the command line share one set of rules.
struct Flags {
  std::optional<std::string> positional_preset;
  std::vector<std::pair<std::string, std::optional<std::string>>> values{
      {"preset", {}}, {"policy", {}},  {"lambda", {}},  {"mu", {}},      {"rate", {}},
      {"beta", {}},   {"interp", {}},  {"horizon", {}}, {"reps", {}},    {"seed", {}},
      {"out", {}},    {"workers", {}}, {"ceiling", {}}, {"beta_max", {}}};
  std::optional<std::string> config_path;
  std::optional<std::string> only;
};

const char* describe(std::string_view key) {
  if (key == "preset") return "Figure preset: fig7a fig7b fig8 fig9a fig9b fig9c fig10a fig10b";
  if (key == "policy") return "Sampling policy: uniform, threshold or zero_wait";
  if (key == "lambda") return "Source event rate(s), comma-separated";
  if (key == "mu") return "Service rate(s), comma-separated";
  if (key == "rate") return "Uniform sampling rate(s) r";
  if (key == "beta") return "Threshold(s) beta";
  if (key == "interp") return "Reconstruction: off, single, uniform or oracle (list allowed)";
  if (key == "horizon") return "Simulation horizon T";
  if (key == "reps") return "Replications per grid point";
  if (key == "seed") return "Base seed; replication i uses seed + i";
  if (key == "out") return "Output directory (default $RECON_OUT_DIR or .)";
  if (key == "workers") return "Concurrent simulation tasks";
  if (key == "ceiling") return "Plot ceiling for unstable points in the JSON summary";
  return "Largest threshold searched by optimize";
}

void add_flags(CLI::App& sub, Flags& flags) {
  sub.add_option("preset_name", flags.positional_preset, "Figure preset (same as --preset)");
  for (auto& [key, value] : flags.values) {
    std::string name = "--" + key;
    std::replace(name.begin(), name.end(), '_', '-');
    sub.add_option(name, value, describe(key));
  }
  sub.add_option("--config", flags.config_path, "key = value file; flags take precedence");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

ExperimentSpec build_spec(Command command, const Flags& flags) {
  ExperimentSpec spec;
  spec.command = command;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    spec.out_dir = env;
  }
  if (flags.config_path) apply_config(spec, parse_config_text(read_file(*flags.config_path)));

  std::vector<ConfigEntry> overrides;
  if (flags.positional_preset) overrides.emplace_back("preset", *flags.positional_preset);
  for (const auto& [key, value] : flags.values) {
    if (value) overrides.emplace_back(key, *value);
  }
  apply_config(spec, overrides);
  spec.command = command;
  spec.validate();
  return spec;
}

int run_validate(const Flags& flags, std::ostream& out) {
  const auto only = flags.only ? split_list(*flags.only) : std::vector<std::string>{};
  bool all_passed = true;
  for (const auto& res : validation::run_suite(only)) {
    out << validation::format_result(res) << '\n';
    all_passed = all_passed && res.passed;
  }
  out << (all_passed ? "all criteria passed" : "some criteria FAILED") << '\n';
  return all_passed ? kExitOk : kExitNumerical;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distortion of a Poisson counting process reconstructed through a queue"};
  app.name("recon");
  app.require_subcommand(1);

  Flags flags;
  const std::pair<Command, const char*> commands[] = {
      {Command::analytic, "Closed-form distortion on a parameter grid"},
      {Command::simulate, "Simulate a parameter grid"},
      {Command::sweep, "Simulate a figure preset or grid"},
      {Command::optimize, "Optimal sampling rate or threshold"},
      {Command::lowerbound, "Interpolation lower bound on a rate grid"},
      {Command::validate, "Run the simulation-vs-analytic reconciliation suite"},
  };
  std::vector<std::pair<Command, CLI::App*>> subs;
  for (const auto& [command, help] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(command)), help);
    if (command == Command::validate) {
      sub->add_option("--only", flags.only, "Comma-separated criterion ids to run");
    } else {
      add_flags(*sub, flags);
    }
    subs.emplace_back(command, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Command command = Command::simulate;
  for (const auto& [c, sub] : subs) {
    if (sub->parsed()) command = c;
  }

  try {
    if (command == Command::validate) return run_validate(flags, out);
    const ExperimentSpec spec = build_spec(command, flags);
    const ExperimentResult result = run_experiment(spec);
    out << result.stdout_text;
    const auto [csv, json] = write_artifacts(spec, result);
    out << "wrote " << csv.string() << " and " << json.string() << '\n';
    return kExitOk;
  } catch (const ParameterError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContractError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    // Instability, non-convergence, infeasibility.
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace recon
