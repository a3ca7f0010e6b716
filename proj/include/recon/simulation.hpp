#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "recon/interpolation.hpp"
#include "recon/packet.hpp"
#include "recon/policy.hpp"
#include "recon/process.hpp"

namespace recon {

struct SimConfig {
  double lambda = 0.9;
  double mu = 1.0;
  Policy policy = UniformPolicy{0.5};
  double horizon = 1e6;
  std::uint64_t seed = 1;
  InterpolationMode interpolation = InterpolationMode::off;
  /// A run is flagged unstable when more packets than this are still queued at T.
  std::int64_t unstable_backlog = 1000;

  /// Throws ParameterError on non-positive rates, horizon or policy parameter.
  void validate() const;
};

/// Everything produced by one pass of the pipeline, before scoring.
struct SimulationRun {
  SimConfig config;
  ProcessPath source;
  std::vector<SamplePacket> packets;  // sampled in [0, T]; FIFO order
  std::int64_t backlog_at_horizon = 0;
  bool unstable = false;
};

/// Summed (or averaged) sub-polygon areas. Zero-wait runs have no separate wait area:
/// there s_b is the transmission area and s_c is empty.
struct AreaBreakdown {
  double s_a = 0.0;
  double s_b = 0.0;
  std::optional<double> s_c;

  double total() const noexcept { return s_a + s_b + s_c.value_or(0.0); }
};

struct DistortionReport {
  double horizon = 0.0;
  double theta_hat = 0.0;      // (1/T) integral of N - N_hat
  double abs_theta_hat = 0.0;  // (1/T) integral of |N - N_hat|
  std::optional<double> mean_delay;
  std::optional<double> mean_aoi;
  std::int64_t sample_count = 0;
  std::int64_t delivered_count = 0;
  std::int64_t backlog = 0;
  bool unstable = false;
  AreaBreakdown area_breakdown;  // of the plain (non-interpolated) reconstruction
};

// ---------------------------------------------------------------------------
// Sampling triggers

/// t_i = i d for every i >= 1 with t_i <= T.
std::vector<double> uniform_trigger_times(double interval, double horizon);

/// t_i = s_{i beta}: the arrival instant of every beta-th source event.
std::vector<double> threshold_trigger_times(const ProcessPath& source, int beta);

/// t_1 = 0 and t_{i+1} = t_i + v_i, i.e. the instants the server turns idle, while t <= T.
std::vector<double> zero_wait_trigger_times(std::span<const double> service_times,
                                            double horizon);

// ---------------------------------------------------------------------------

/// Runs source, sampler and FIFO server over [0, T]. Unstable settings are allowed.
SimulationRun run_pipeline(const SimConfig& config);

/// Scores a finished run with the given monitor-side reconstruction.
DistortionReport score_run(const SimulationRun& run, InterpolationMode mode);

/// run_pipeline followed by score_run with config.interpolation.
DistortionReport simulate(const SimConfig& config);

/// Time average over [0, T] of the age of the freshest delivered sample. Before the
/// first delivery the age is t. Throws ContractError on an empty packet list.
double measure_aoi(std::span<const SamplePacket> packets, double horizon);

struct PolygonArea {
  std::int64_t sample_index = 0;  // 0 for the trailing polygon whose sample falls after T
  std::int64_t height = 0;        // source events attributed to this sample
  double s_a = 0.0;
  double s_b = 0.0;
  std::optional<double> s_c;
  bool complete = false;  // delivered by T, so no part was clipped
};

struct PolygonDecomposition {
  std::vector<PolygonArea> polygons;
  AreaBreakdown totals;          // clipped to [0, T]; sums to the distortion integral
  AreaBreakdown complete_means;  // per-polygon means over complete polygons
  std::int64_t complete_count = 0;
};

/// Splits the distortion area of a run into per-sample sub-polygons: sampling (A),
/// queueing wait (B) and service (C), or sampling and transmission for zero-wait runs.
PolygonDecomposition decompose_polygons(const SimulationRun& run);

}  // namespace recon
