#include "recon/random.hpp"

#include <cmath>

namespace recon {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, Stream stream, std::uint64_t substream) noexcept
    : state_(mix64(mix64(mix64(seed) ^ static_cast<std::uint64_t>(stream)) ^ substream)) {}

RandomStream::result_type RandomStream::operator()() noexcept {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RandomStream::uniform_open() noexcept {
  // 53 random bits centred in their cell: never 0, never 1.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::exponential(double rate) noexcept {
  return -std::log(uniform_open()) / rate;
}

}  // namespace recon
