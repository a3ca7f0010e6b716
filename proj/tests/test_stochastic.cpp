#include <doctest.h>

#include <cmath>
#include <numeric>

#include "recon/errors.hpp"
#include "recon/process.hpp"
#include "recon/random.hpp"
#include "recon/step_trace.hpp"

using namespace recon;

TEST_CASE("random streams are reproducible and independent") {
  RandomStream a(5, Stream::arrivals), b(5, Stream::arrivals), c(5, Stream::services);
  bool all_equal = true;
  bool any_equal = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a(), y = b(), z = c();
    all_equal = all_equal && x == y;
    any_equal = any_equal || x == z;
  }
  CHECK(all_equal);
  CHECK_FALSE(any_equal);
  CHECK(RandomStream(5, Stream::interpolation, 1)() != RandomStream(5, Stream::interpolation, 2)());
}

TEST_CASE("uniform draws stay strictly inside (0, 1)") {
  RandomStream rng(11);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform_open();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("generate_poisson_path: zero horizon gives an empty path") {
  const ProcessPath p = generate_poisson_path(1.0, 0.0, 7);
  CHECK(p.size() == 0);
  CHECK(p.count_at(0.0) == 0);
}

TEST_CASE("generate_poisson_path: count within 3 sigma of lambda T") {
  const double T = 1e6;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const ProcessPath p = generate_poisson_path(1.0, T, seed);
    const double sigma = std::sqrt(T) / T;
    CHECK(std::abs(static_cast<double>(p.size()) / T - 1.0) < 3.0 * sigma);
  }
}

TEST_CASE("generate_poisson_path: mean interarrival is 1/lambda") {
  const ProcessPath p = generate_poisson_path(0.9, 1e6, 42);
  const auto gaps = p.interarrival_gaps();
  const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / gaps.size();
  CHECK(mean == doctest::Approx(1.0 / 0.9).epsilon(0.01));
}

TEST_CASE("generate_poisson_path: strictly increasing times inside (0, T]") {
  const ProcessPath p = generate_poisson_path(3.0, 1e4, 9);
  bool ok = p.arrival_times.front() > 0.0 && p.arrival_times.back() <= 1e4;
  for (std::size_t i = 1; i < p.size(); ++i) ok = ok && p.arrival_times[i] > p.arrival_times[i - 1];
  CHECK(ok);
}

TEST_CASE("generate_poisson_path rejects bad parameters") {
  CHECK_THROWS_AS(generate_poisson_path(0.0, 1.0, 1), ParameterError);
  CHECK_THROWS_AS(generate_poisson_path(-1.0, 1.0, 1), ParameterError);
  CHECK_THROWS_AS(generate_poisson_path(1.0, -1.0, 1), ParameterError);
}

TEST_CASE("counting trace evaluates to n at the n-th arrival") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ProcessPath p = generate_poisson_path(2.0, 500.0, seed);
    const StepTrace n = StepTrace::counting(p);
    bool ok = n.value_at(0.0) == 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      ok = ok && n.value_at(p.arrival_times[k]) == static_cast<std::int64_t>(k + 1);
      ok = ok && p.count_at(p.arrival_times[k]) == static_cast<std::int64_t>(k + 1);
    }
    CHECK(ok);
  }
}

TEST_CASE("service model") {
  const ServiceModel s(2.0);
  CHECK(s.density(0.0) == doctest::Approx(2.0));
  CHECK(s.density(1.0) == doctest::Approx(2.0 * std::exp(-2.0)));
  CHECK_THROWS_AS(ServiceModel(0.0), ParameterError);
  RandomStream rng(3, Stream::services);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) sum += s.draw(rng);
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("order statistics oracle: E{sum s_k | N(d)=n} = n d / 2") {
  SUBCASE("single event") {
    const auto est = order_statistics_oracle(1, 2.0, 200000, 1);
    CHECK(est.mean == doctest::Approx(1.0).epsilon(0.01));
  }
  SUBCASE("n=4, d=1") {
    const auto est = order_statistics_oracle(4, 1.0, 1000000, 2);
    CHECK(std::abs(est.mean - 2.0) < 0.01);
    CHECK(std::abs(est.mean - 2.0) < 3.0 * est.standard_error);
  }
  SUBCASE("n=3, d=2") {
    const auto est = order_statistics_oracle(3, 2.0, 1000000, 3);
    CHECK(std::abs(est.mean - 3.0) < 0.02);
    CHECK(std::abs(est.mean - 3.0) < 3.0 * est.standard_error);
    CHECK(est.proposals >= est.accepted);
  }
}
