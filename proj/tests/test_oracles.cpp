#include <doctest.h>

#include <cmath>

#include "recon/oracles.hpp"

using namespace recon;

// The oracles are checked against cases with known answers before they are trusted.

TEST_CASE("bisection roots") {
  CHECK(oracle::bisection_z0(1, 0.5, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
  const double s = oracle::bisection_sigma(0.5, 1.0);
  CHECK(std::abs(s - std::exp(-2.0 * (1.0 - s))) < 1e-14);
}

TEST_CASE("brute-force chain reduces to M/M/1 at beta 1") {
  const auto sol = oracle::erlang_chain_bruteforce(1, 0.5, 1.0, 200);
  CHECK(sol.mean_queue == doctest::Approx(1.0).epsilon(1e-9));  // rho / (1 - rho)
  CHECK(sol.observed_pmf[0] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("riemann oracle on a rectangle") {
  const StepTrace one(1, {});
  const StepTrace zero(0, {});
  CHECK(oracle::riemann_difference(one, zero, 10.0, 1e-3) == doctest::Approx(10.0));
}

TEST_CASE("lindley replay") {
  const std::vector<double> t{0.0, 1.0, 1.5, 5.0};
  const std::vector<double> v{2.0, 1.0, 0.5, 1.0};
  const auto w = oracle::lindley_replay(t, v);
  CHECK(w == std::vector<double>{0.0, 1.0, 1.5, 0.0});
}

TEST_CASE("periodic AoI tends to c + p/2") {
  CHECK(oracle::periodic_aoi(2.0, 0.5, 1000000) == doctest::Approx(1.5).epsilon(1e-5));
}

TEST_CASE("least squares on an exact line") {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const auto fit = oracle::least_squares(x, y);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.r_squared == doctest::Approx(1.0));
}
