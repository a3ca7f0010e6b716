#include "recon/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "recon/errors.hpp"

namespace recon {

namespace {

void require_rate(double lambda, const char* what) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ParameterError(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

std::int64_t ProcessPath::count_at(double t) const noexcept {
  return std::upper_bound(arrival_times.begin(), arrival_times.end(), t) -
         arrival_times.begin();
}

std::vector<double> ProcessPath::interarrival_gaps() const {
  std::vector<double> gaps(arrival_times.size());
  std::adjacent_difference(arrival_times.begin(), arrival_times.end(), gaps.begin());
  return gaps;
}

ServiceModel::ServiceModel(double mu) : rate_mu(mu) { require_rate(mu, "service rate mu"); }

double ServiceModel::density(double x) const noexcept {
  return x < 0.0 ? 0.0 : rate_mu * std::exp(-rate_mu * x);
}

ProcessPath generate_poisson_path(double lambda, double T, std::uint64_t seed) {
  RandomStream rng(seed, Stream::arrivals);
  return generate_poisson_path(lambda, T, rng);
}

ProcessPath generate_poisson_path(double lambda, double T, RandomStream& rng) {
  require_rate(lambda, "arrival rate lambda");
  if (!(T >= 0.0) || !std::isfinite(T)) {
    throw ParameterError("horizon T must be non-negative and finite");
  }
  ProcessPath path{lambda, T, {}};
  path.arrival_times.reserve(static_cast<std::size_t>(lambda * T * 1.05 + 16.0));
  double s = 0.0;
  for (;;) {
    double next = s + rng.exponential(lambda);
    // A gap far below the ulp of s would round to a tie; keep times strictly increasing.
    if (next <= s) next = std::nextafter(s, INFINITY);
    if (next > T) break;
    path.arrival_times.push_back(next);
    s = next;
  }
  return path;
}

OrderStatisticsEstimate order_statistics_oracle(std::int64_t n, double d, std::uint64_t trials,
                                                std::uint64_t seed) {
  if (n < 1) throw ParameterError("order statistics oracle needs n >= 1");
  if (!(d > 0.0) || !std::isfinite(d)) throw ParameterError("interval d must be positive");
  if (trials == 0) throw ParameterError("trials must be positive");

  RandomStream rng(seed, Stream::oracle);
  const double lambda = static_cast<double>(n) / d;
  OrderStatisticsEstimate est;
  double mean = 0.0;
  double m2 = 0.0;
  while (est.accepted < trials) {
    ++est.proposals;
    double s = 0.0;
    double sum = 0.0;
    std::int64_t count = 0;
    while (count <= n) {
      s += rng.exponential(lambda);
      if (s > d) break;
      sum += s;
      ++count;
    }
    if (count != n) continue;
    ++est.accepted;
    const double delta = sum - mean;
    mean += delta / static_cast<double>(est.accepted);
    m2 += delta * (sum - mean);
  }
  est.mean = mean;
  if (est.accepted > 1) {
    est.standard_error =
        std::sqrt(m2 / static_cast<double>(est.accepted - 1) / static_cast<double>(est.accepted));
  }
  return est;
}

}  // namespace recon
