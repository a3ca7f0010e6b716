#pragma once

#include <string>
#include <variant>

namespace recon {

/// Samples on the grid t_i = i / rate.
struct UniformPolicy {
  double rate = 0.0;
  double interval() const noexcept { return 1.0 / rate; }
};

/// A sample at the arrival instant of every beta-th source event.
struct ThresholdPolicy {
  int beta = 1;
};

/// A sample whenever the server goes idle, starting at t = 0.
struct ZeroWaitPolicy {};

using Policy = std::variant<UniformPolicy, ThresholdPolicy, ZeroWaitPolicy>;

/// "uniform", "threshold" or "zero_wait".
std::string policy_name(const Policy& policy);

/// Throws ParameterError on a non-positive rate or a threshold below 1.
void validate_policy(const Policy& policy);

}  // namespace recon
