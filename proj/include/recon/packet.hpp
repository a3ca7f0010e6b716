#pragma once

#include <cstdint>

namespace recon {

/// Lifecycle of one sample through the FIFO queue.
/// delivery_time = sample_time + wait + service.
struct SamplePacket {
  std::int64_t index = 0;  // 1-based, in sampling order
  double sample_time = 0.0;
  std::int64_t sampled_value = 0;  // N(sample_time)
  double enqueue_time = 0.0;
  double service_start = 0.0;
  double wait = 0.0;
  double service = 0.0;
  double delivery_time = 0.0;

  double delay() const noexcept { return wait + service; }
};

}  // namespace recon
