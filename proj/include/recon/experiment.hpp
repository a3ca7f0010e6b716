#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "recon/interpolation.hpp"
#include "recon/policy.hpp"
#include "recon/simulation.hpp"

namespace recon {

enum class Command { analytic, simulate, sweep, optimize, lowerbound, validate };

enum class Preset { none, fig7a, fig7b, fig8, fig9a, fig9b, fig9c, fig10a, fig10b };

Command parse_command(std::string_view text);
Preset parse_preset(std::string_view text);
std::string_view to_string(Command command) noexcept;
std::string_view to_string(Preset preset) noexcept;

/// Name of the environment variable holding the default output directory.
inline constexpr const char* kOutputDirEnv = "RECON_OUT_DIR";

struct ExperimentSpec {
  Command command = Command::simulate;
  std::string policy = "uniform";  // uniform | threshold | zero_wait
  std::vector<double> lambdas{0.9};
  std::vector<double> mus{1.0};
  std::vector<double> rates{0.5};
  std::vector<int> betas{1};
  std::vector<InterpolationMode> interpolations{InterpolationMode::off};
  double horizon = 1e6;
  int replications = 1;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = ".";
  Preset preset = Preset::none;
  int workers = 1;
  double plot_ceiling = 30.0;
  int beta_max = 64;

  /// Throws ParameterError: empty grid, replications < 1, unknown policy, ...
  void validate() const;
};

/// Replaces the policy and grids with those of a figure preset.
void apply_preset(ExperimentSpec& spec, Preset preset);

/// One `key = value` line of a config file; list keys may repeat.
using ConfigEntry = std::pair<std::string, std::string>;

/// Parses `key = value` lines; `#` starts a comment. Throws ParameterError on a
/// malformed line.
std::vector<ConfigEntry> parse_config_text(std::string_view text);

/// Applies entries over `spec`. A list key seen for the first time replaces the
/// current list; later occurrences append. Values may also be comma-separated.
void apply_config(ExperimentSpec& spec, const std::vector<ConfigEntry>& entries);

/// Splits a comma-separated list, dropping empty items.
std::vector<std::string> split_list(std::string_view text);

struct GridPoint {
  Policy policy;
  double lambda = 0.0;
  double mu = 0.0;
  InterpolationMode interpolation = InterpolationMode::off;
};

/// Cartesian product of the grids relevant to the spec's policy, in a fixed order:
/// lambda, mu, policy parameter, interpolation mode.
std::vector<GridPoint> expand_grid(const ExperimentSpec& spec);

struct RunRecord {
  GridPoint point;
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
  std::optional<DistortionReport> report;
  std::optional<double> theta_analytic;
  std::optional<double> theta_lower_bound;
};

/// The bit-exact CSV header line, without a trailing newline.
std::string_view csv_header() noexcept;
std::string csv_row(const RunRecord& record);

/// Everything but the JSON summary: one row per (grid point, replication).
std::string csv_body(const std::vector<RunRecord>& records);

struct ExperimentResult {
  std::vector<RunRecord> records;
  std::string summary_json;
  std::string stdout_text;
  bool success = true;  // false when a validate criterion failed
};

/// Executes analytic, simulate, sweep, optimize or lowerbound. Simulation tasks run on
/// up to spec.workers threads; records come back in grid order regardless.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Writes <out_dir>/<stem>.csv and <stem>.json. Throws std::filesystem::filesystem_error
/// or IoError on failure.
std::pair<std::filesystem::path, std::filesystem::path> write_artifacts(
    const ExperimentSpec& spec, const ExperimentResult& result);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stable 64-bit FNV-1a hash of everything needed to replay one CSV row.
std::uint64_t config_hash(const RunRecord& record);

}  // namespace recon
