#pragma once

#include <cstdint>
#include <limits>

namespace recon {

/// Identifiers of the independent random streams used by one pipeline run.
enum class Stream : std::uint64_t {
  arrivals = 1,
  services = 2,
  interpolation = 3,
  oracle = 4,
};

/// Splittable SplitMix64 generator.
///
/// A stream is keyed by (seed, stream id, substream index); distinct keys give
/// statistically independent sequences, so adding a consumer of one stream never
/// shifts the draws of another. Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed, Stream stream = Stream::arrivals,
                        std::uint64_t substream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform draw on the open interval (0, 1).
  double uniform_open() noexcept;

  /// Exponential draw with the given rate, by inversion. Always strictly positive.
  double exponential(double rate) noexcept;

 private:
  std::uint64_t state_;
};

/// SplitMix64 finalizer; exposed for seed derivation.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace recon
