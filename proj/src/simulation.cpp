#include "recon/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "recon/errors.hpp"
#include "recon/random.hpp"
#include "recon/step_trace.hpp"

namespace recon {

namespace {

// Single exponential server with FIFO discipline (Lindley recursion).
class FifoServer {
 public:
  SamplePacket admit(std::int64_t index, double t, std::int64_t value, double service) {
    SamplePacket p;
    p.index = index;
    p.sample_time = t;
    p.sampled_value = value;
    p.enqueue_time = t;
    p.service_start = std::max(t, free_at_);
    p.wait = p.service_start - t;
    p.service = service;
    p.delivery_time = p.service_start + service;
    free_at_ = p.delivery_time;
    return p;
  }

  double free_at() const noexcept { return free_at_; }

 private:
  double free_at_ = 0.0;
};

double clipped_length(double a, double b, double horizon) noexcept {
  return std::max(0.0, std::min(b, horizon) - std::min(a, horizon));
}

}  // namespace

void SimConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be positive");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ParameterError("mu must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ParameterError("horizon T must be positive");
  }
  validate_policy(policy);
}

std::vector<double> uniform_trigger_times(double interval, double horizon) {
  if (!(interval > 0.0) || !std::isfinite(interval)) {
    throw ParameterError("sampling interval must be positive");
  }
  if (!(horizon >= 0.0)) throw ParameterError("horizon must be non-negative");
  auto count = static_cast<std::int64_t>(std::floor(horizon / interval));
  while (static_cast<double>(count + 1) * interval <= horizon) ++count;
  while (count > 0 && static_cast<double>(count) * interval > horizon) --count;
  std::vector<double> times(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) times[i] = static_cast<double>(i + 1) * interval;
  return times;
}

std::vector<double> threshold_trigger_times(const ProcessPath& source, int beta) {
  if (beta < 1) throw ParameterError("threshold beta must be >= 1");
  std::vector<double> times;
  times.reserve(source.size() / beta + 1);
  for (std::size_t k = beta; k <= source.size(); k += beta) {
    times.push_back(source.arrival_times[k - 1]);
  }
  return times;
}

std::vector<double> zero_wait_trigger_times(std::span<const double> service_times,
                                            double horizon) {
  std::vector<double> times;
  double t = 0.0;
  for (double v : service_times) {
    if (t > horizon) break;
    times.push_back(t);
    t += v;
  }
  return times;
}

SimulationRun run_pipeline(const SimConfig& config) {
  config.validate();
  SimulationRun run;
  run.config = config;
  const double T = config.horizon;

  RandomStream arrivals(config.seed, Stream::arrivals);
  RandomStream services(config.seed, Stream::services);
  run.source = generate_poisson_path(config.lambda, T, arrivals);
  const ProcessPath& source = run.source;

  FifoServer server;
  std::int64_t index = 0;
  auto admit = [&](double t) {
    const SamplePacket& p = run.packets.emplace_back(
        server.admit(++index, t, source.count_at(t), services.exponential(config.mu)));
    return p.delivery_time;
  };

  if (const auto* u = std::get_if<UniformPolicy>(&config.policy)) {
    const auto times = uniform_trigger_times(u->interval(), T);
    run.packets.reserve(times.size());
    for (double t : times) admit(t);
  } else if (const auto* th = std::get_if<ThresholdPolicy>(&config.policy)) {
    const auto times = threshold_trigger_times(source, th->beta);
    run.packets.reserve(times.size());
    for (double t : times) admit(t);
  } else {
    // Zero-wait: the next sample is taken the instant the previous one is delivered.
    for (double t = 0.0; t <= T;) t = admit(t);
  }

  for (auto it = run.packets.rbegin(); it != run.packets.rend() && it->delivery_time > T; ++it) {
    ++run.backlog_at_horizon;
  }
  run.unstable = run.backlog_at_horizon > config.unstable_backlog;
  return run;
}

DistortionReport score_run(const SimulationRun& run, InterpolationMode mode) {
  const double T = run.config.horizon;
  const StepTrace truth = StepTrace::counting(run.source);
  const StepTrace monitor =
      mode == InterpolationMode::oracle
          ? oracle_reconstruction(run.source, run.packets)
          : reconstruct_with_interpolation(run.packets, {mode, run.config.seed});
  const DifferenceArea area = integrate_difference(truth, monitor, 0.0, T);

  DistortionReport report;
  report.horizon = T;
  report.theta_hat = area.signed_area / T;
  report.abs_theta_hat = area.absolute_area / T;
  report.sample_count = static_cast<std::int64_t>(run.packets.size());
  report.backlog = run.backlog_at_horizon;
  report.delivered_count = report.sample_count - run.backlog_at_horizon;
  report.unstable = run.unstable;
  if (!run.packets.empty()) {
    double total_delay = 0.0;
    for (const auto& p : run.packets) total_delay += p.delay();
    report.mean_delay = total_delay / static_cast<double>(run.packets.size());
    report.mean_aoi = measure_aoi(run.packets, T);
  }
  report.area_breakdown = decompose_polygons(run).totals;
  return report;
}

DistortionReport simulate(const SimConfig& config) {
  return score_run(run_pipeline(config), config.interpolation);
}

double measure_aoi(std::span<const SamplePacket> packets, double horizon) {
  if (packets.empty()) throw ContractError("AoI is undefined: no deliveries");
  if (!(horizon > 0.0)) throw ParameterError("horizon must be positive");
  // Age is t - u on each stretch, u being the newest generation time delivered so far.
  double freshest = 0.0;
  double t = 0.0;
  double area = 0.0;
  auto accumulate = [&](double until) {
    const double a0 = t - freshest;
    const double a1 = until - freshest;
    area += 0.5 * (a1 * a1 - a0 * a0);
    t = until;
  };
  double prev_delivery = -1.0;
  for (const auto& p : packets) {
    if (!(p.delivery_time > prev_delivery)) {
      throw ContractError("measure_aoi expects packets sorted by delivery time");
    }
    prev_delivery = p.delivery_time;
    if (p.delivery_time > horizon) break;
    accumulate(p.delivery_time);
    freshest = std::max(freshest, p.sample_time);
  }
  accumulate(horizon);
  return area / horizon;
}

PolygonDecomposition decompose_polygons(const SimulationRun& run) {
  const double T = run.config.horizon;
  const bool zero_wait = std::holds_alternative<ZeroWaitPolicy>(run.config.policy);
  const auto& arrivals = run.source.arrival_times;

  PolygonDecomposition out;
  out.polygons.reserve(run.packets.size() + 1);
  if (!zero_wait) {
    out.totals.s_c = 0.0;
    out.complete_means.s_c = 0.0;
  }

  std::size_t next_event = 0;
  for (const auto& p : run.packets) {
    PolygonArea poly;
    poly.sample_index = p.index;
    while (next_event < arrivals.size() && arrivals[next_event] <= p.sample_time) {
      poly.s_a += p.sample_time - arrivals[next_event];
      ++poly.height;
      ++next_event;
    }
    const auto h = static_cast<double>(poly.height);
    const double start_service = p.sample_time + p.wait;
    if (zero_wait) {
      poly.s_b = h * clipped_length(p.sample_time, p.delivery_time, T);
    } else {
      poly.s_b = h * clipped_length(p.sample_time, start_service, T);
      poly.s_c = h * clipped_length(start_service, p.delivery_time, T);
    }
    poly.complete = p.delivery_time <= T;
    out.polygons.push_back(poly);
  }
  // Events after the last sample but before T: only their sampling area is visible.
  if (next_event < arrivals.size()) {
    PolygonArea tail;
    for (; next_event < arrivals.size(); ++next_event) {
      tail.s_a += T - arrivals[next_event];
      ++tail.height;
    }
    if (!zero_wait) tail.s_c = 0.0;
    out.polygons.push_back(tail);
  }

  for (const auto& poly : out.polygons) {
    out.totals.s_a += poly.s_a;
    out.totals.s_b += poly.s_b;
    if (poly.s_c) *out.totals.s_c += *poly.s_c;
    if (poly.complete) {
      ++out.complete_count;
      out.complete_means.s_a += poly.s_a;
      out.complete_means.s_b += poly.s_b;
      if (poly.s_c) *out.complete_means.s_c += *poly.s_c;
    }
  }
  if (out.complete_count > 0) {
    const auto n = static_cast<double>(out.complete_count);
    out.complete_means.s_a /= n;
    out.complete_means.s_b /= n;
    if (out.complete_means.s_c) *out.complete_means.s_c /= n;
  }
  return out;
}

}  // namespace recon
