#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "recon/random.hpp"

namespace recon {

/// Realized arrival instants of a homogeneous Poisson counting process on (0, T].
struct ProcessPath {
  double rate_lambda = 0.0;
  double horizon_T = 0.0;
  std::vector<double> arrival_times;  // strictly increasing, each in (0, T]

  std::size_t size() const noexcept { return arrival_times.size(); }

  /// N(t): number of events in (0, t]. An event exactly at t is counted.
  std::int64_t count_at(double t) const noexcept;

  /// Interarrival gaps X_n = s_n - s_{n-1}, with s_0 = 0.
  std::vector<double> interarrival_gaps() const;
};

/// Exponential server, f(x) = mu e^{-mu x}.
struct ServiceModel {
  double rate_mu = 1.0;

  explicit ServiceModel(double mu);
  double density(double x) const noexcept;
  double draw(RandomStream& rng) const noexcept { return rng.exponential(rate_mu); }
};

/// Poisson path with rate `lambda` on (0, T], drawn from the arrivals stream of `seed`.
/// T = 0 yields an empty path.
ProcessPath generate_poisson_path(double lambda, double T, std::uint64_t seed);

/// Same, drawing from a caller-owned stream.
ProcessPath generate_poisson_path(double lambda, double T, RandomStream& rng);

struct OrderStatisticsEstimate {
  double mean = 0.0;            // estimate of E{sum s_k | N(d) = n}
  double standard_error = 0.0;
  std::uint64_t accepted = 0;   // conditional samples used
  std::uint64_t proposals = 0;  // paths generated, including rejected ones
};

/// Monte-Carlo estimate of E{sum_{k<=n} s_k | N(d) = n}, by rejection: Poisson paths on
/// (0, d] are generated until `trials` of them have exactly n events. The conditional
/// law does not depend on the rate, so the rate is set to n/d to maximise acceptance.
OrderStatisticsEstimate order_statistics_oracle(std::int64_t n, double d, std::uint64_t trials,
                                                std::uint64_t seed);

}  // namespace recon
