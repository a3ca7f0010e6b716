#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "recon/packet.hpp"
#include "recon/process.hpp"
#include "recon/step_trace.hpp"

namespace recon {

enum class InterpolationMode {
  off,           // hold the last delivered value
  single_point,  // one guessed unit step per delivery gap
  uniform_j,     // J guessed unit steps at sorted uniform times
  oracle,        // idealised reconstruction that reads the source path
};

std::string_view to_string(InterpolationMode mode) noexcept;

/// Accepts "off", "single", "single_point", "uniform", "uniform_j", "oracle".
InterpolationMode parse_interpolation_mode(std::string_view text);

struct InterpolationPlan {
  InterpolationMode mode = InterpolationMode::off;
  std::uint64_t seed = 0;  // insertion draws; stream keyed by packet index
};

/// The monitor's trace without guessing: steps to N(t_i) at each delivery t'_i.
StepTrace plain_reconstruction(std::span<const SamplePacket> packets);

/// Monitor-side reconstruction with guessed insertions between deliveries.
///
/// When a delivery raises the level by J + 1 > 1, uniform_j places J unit steps at
/// sorted uniform times in (t'_{i-1}, t'_i); single_point places one. The level after
/// each delivery is exactly N(t_i), as without interpolation. Throws ContractError if
/// deliveries are not strictly increasing, and for the oracle mode (it needs the
/// source path; use oracle_reconstruction).
StepTrace reconstruct_with_interpolation(std::span<const SamplePacket> packets,
                                         const InterpolationPlan& plan);

/// Best reconstruction consistent with the next pending sample: on [t'_{k-1}, t'_k) the
/// level is N(min(t, t_k)). Jumps straight to N(t_k) when t_k has already passed, and
/// tracks the source exactly until t_k otherwise. Test and diagnostic use only.
StepTrace oracle_reconstruction(const ProcessPath& source, std::span<const SamplePacket> packets);

}  // namespace recon
