#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "recon/errors.hpp"
#include "recon/oracles.hpp"
#include "recon/random.hpp"
#include "recon/step_trace.hpp"

using namespace recon;

namespace {

StepTrace random_trace(RandomStream& rng, int steps, double T) {
  std::vector<double> times;
  for (int i = 0; i < steps; ++i) times.push_back(rng.uniform_open() * T);
  std::sort(times.begin(), times.end());
  // Non-decreasing with increments 0..3, like a sampled counting process.
  std::int64_t level = static_cast<std::int64_t>(rng() % 5);
  StepTraceBuilder b(level);
  for (double t : times) b.step_to(t, level += static_cast<std::int64_t>(rng() % 4));
  return std::move(b).build();
}

}  // namespace

TEST_CASE("integrate_difference: identical traces") {
  const StepTrace a(0, {{1.0, 1}, {2.5, 3}});
  const auto area = integrate_difference(a, a, 10.0);
  CHECK(area.signed_area == 0.0);
  CHECK(area.absolute_area == 0.0);
}

TEST_CASE("integrate_difference: rectangle") {
  const StepTrace one(1, {});
  const StepTrace zero(0, {});
  CHECK(integrate_difference(one, zero, 10.0).signed_area == doctest::Approx(10.0));
  CHECK(integrate_difference(zero, one, 10.0).signed_area == doctest::Approx(-10.0));
  CHECK(integrate_difference(zero, one, 10.0).absolute_area == doctest::Approx(10.0));
}

TEST_CASE("integrate_difference ignores breakpoints past the end and honours begin") {
  const StepTrace a(0, {{1.0, 2}, {20.0, 100}});
  const StepTrace zero(0, {});
  CHECK(integrate_difference(a, zero, 10.0).signed_area == doctest::Approx(18.0));
  CHECK(integrate_difference(a, zero, 5.0, 10.0).signed_area == doctest::Approx(10.0));
}

TEST_CASE("integrate_difference matches a dense Riemann sum on random traces") {
  RandomStream rng(2024, Stream::oracle);
  for (int trial = 0; trial < 3; ++trial) {
    const StepTrace a = random_trace(rng, 100, 10.0);
    const StepTrace b = random_trace(rng, 100, 10.0);
    const double exact = integrate_difference(a, b, 10.0).signed_area;
    const double riemann = oracle::riemann_difference(a, b, 10.0, 1e-4);
    CHECK(std::abs(exact - riemann) <= 1e-3 * std::max(1.0, std::abs(riemann)));
  }
}

TEST_CASE("integrate_difference is linear") {
  RandomStream rng(77, Stream::oracle);
  for (int trial = 0; trial < 20; ++trial) {
    const StepTrace a = random_trace(rng, 50, 100.0);
    const StepTrace b = random_trace(rng, 70, 100.0);
    const StepTrace c = random_trace(rng, 30, 100.0);
    const double ab = integrate_difference(a, b, 100.0).signed_area;
    const double bc = integrate_difference(b, c, 100.0).signed_area;
    const double ac = integrate_difference(a, c, 100.0).signed_area;
    CHECK(std::abs(ab + bc - ac) < 1e-12 * std::max(1.0, std::abs(ac)) + 1e-12);
  }
}

TEST_CASE("integrate_difference rejects a reversed interval") {
  const StepTrace a(0, {});
  CHECK_THROWS_AS(integrate_difference(a, a, 5.0, 1.0), ParameterError);
  CHECK_THROWS_AS(integrate_difference(a, a, -1.0, 1.0), ParameterError);
}

TEST_CASE("StepTrace validates breakpoint order") {
  CHECK_THROWS_AS(StepTrace(0, {{2.0, 1}, {1.0, 2}}), ContractError);
  CHECK_THROWS_AS(StepTrace(0, {{1.0, 1}, {1.0, 2}}), ContractError);
  CHECK_THROWS_AS(StepTrace(0, {{-1.0, 1}}), ContractError);
}

TEST_CASE("StepTrace is right-continuous") {
  const StepTrace a(0, {{1.0, 1}, {2.0, 4}});
  CHECK(a.value_at(0.999) == 0);
  CHECK(a.value_at(1.0) == 1);
  CHECK(a.value_at(2.0) == 4);
  CHECK(a.value_at(1e9) == 4);
  CHECK(a.is_non_decreasing());
  CHECK_FALSE(StepTrace(3, {{1.0, 2}}).is_non_decreasing());
}

TEST_CASE("StepTraceBuilder overwrites equal times and refuses going back") {
  StepTraceBuilder b;
  b.step_to(1.0, 1);
  b.step_to(1.0, 2);
  CHECK(b.current_value() == 2);
  CHECK_THROWS_AS(b.step_to(0.5, 3), ContractError);
  const StepTrace t = std::move(b).build();
  CHECK(t.size() == 1);
  CHECK(t.value_at(1.0) == 2);
}
