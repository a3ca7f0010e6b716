#include "recon/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "recon/errors.hpp"
#include "recon/random.hpp"

namespace recon {

namespace {

void require_fifo(std::span<const SamplePacket> packets) {
  for (std::size_t i = 1; i < packets.size(); ++i) {
    if (!(packets[i].delivery_time > packets[i - 1].delivery_time)) {
      throw ContractError("packets must be delivered in strictly increasing order (packet " +
                          std::to_string(packets[i].index) + ")");
    }
  }
}

}  // namespace

std::string_view to_string(InterpolationMode mode) noexcept {
  switch (mode) {
    case InterpolationMode::off:
      return "off";
    case InterpolationMode::single_point:
      return "single";
    case InterpolationMode::uniform_j:
      return "uniform";
    case InterpolationMode::oracle:
      return "oracle";
  }
  return "off";
}

InterpolationMode parse_interpolation_mode(std::string_view text) {
  if (text == "off" || text == "none") return InterpolationMode::off;
  if (text == "single" || text == "single_point") return InterpolationMode::single_point;
  if (text == "uniform" || text == "uniform_j") return InterpolationMode::uniform_j;
  if (text == "oracle") return InterpolationMode::oracle;
  throw ParameterError("unknown interpolation mode '" + std::string(text) + "'");
}

StepTrace plain_reconstruction(std::span<const SamplePacket> packets) {
  require_fifo(packets);
  StepTraceBuilder builder(0);
  builder.reserve(packets.size());
  for (const auto& p : packets) builder.step_to(p.delivery_time, p.sampled_value);
  return std::move(builder).build();
}

StepTrace reconstruct_with_interpolation(std::span<const SamplePacket> packets,
                                         const InterpolationPlan& plan) {
  if (plan.mode == InterpolationMode::off) return plain_reconstruction(packets);
  if (plan.mode == InterpolationMode::oracle) {
    throw ContractError("oracle reconstruction needs the source path");
  }
  require_fifo(packets);

  StepTraceBuilder builder(0);
  builder.reserve(packets.size() * 2);
  std::vector<double> draws;
  double prev_delivery = 0.0;
  std::int64_t level = 0;
  for (const auto& p : packets) {
    const std::int64_t missing = p.sampled_value - level - 1;  // J
    if (missing > 0) {
      const std::int64_t inserts =
          plan.mode == InterpolationMode::uniform_j ? missing : std::int64_t{1};
      RandomStream rng(plan.seed, Stream::interpolation, static_cast<std::uint64_t>(p.index));
      const double lo = prev_delivery;
      const double width = p.delivery_time - lo;
      draws.clear();
      for (std::int64_t j = 0; j < inserts; ++j) {
        const double t = lo + rng.uniform_open() * width;
        // Rounding can land on an endpoint of a very short gap; such draws are dropped.
        if (t > lo && t < p.delivery_time) draws.push_back(t);
      }
      std::sort(draws.begin(), draws.end());
      std::int64_t guessed = level;
      for (double t : draws) builder.step_to(t, ++guessed);
    }
    builder.step_to(p.delivery_time, p.sampled_value);
    level = p.sampled_value;
    prev_delivery = p.delivery_time;
  }
  return std::move(builder).build();
}

StepTrace oracle_reconstruction(const ProcessPath& source, std::span<const SamplePacket> packets) {
  require_fifo(packets);
  const auto& arrivals = source.arrival_times;
  StepTraceBuilder builder(0);
  builder.reserve(arrivals.size() + packets.size());

  double window_start = 0.0;  // t'_{k-1}
  for (const auto& p : packets) {
    // Level at the window start is N(min(t'_{k-1}, t_k)).
    const double start_cap = std::min(window_start, p.sample_time);
    const std::int64_t start_level = source.count_at(start_cap);
    if (start_level != builder.current_value()) builder.step_to(window_start, start_level);
    // Then follow the source through (t'_{k-1}, t_k].
    auto it = std::upper_bound(arrivals.begin(), arrivals.end(), window_start);
    for (std::int64_t n = it - arrivals.begin(); it != arrivals.end() && *it <= p.sample_time;
         ++it) {
      builder.step_to(*it, ++n);
    }
    window_start = p.delivery_time;
  }
  // After the last delivery nothing newer is known: the level holds at N(t_last).
  return std::move(builder).build();
}

}  // namespace recon
