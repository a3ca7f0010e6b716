#include <doctest.h>

#include <cmath>

#include "recon/analytic.hpp"
#include "recon/errors.hpp"
#include "recon/optimize.hpp"

using namespace recon;

TEST_CASE("optimal rate for lambda 0.9") {
  const auto opt = optimal_rate(0.9, 1.0);
  CHECK(opt.r_star == doctest::Approx(0.52).epsilon(0.02));
  CHECK_FALSE(opt.multimodal);
  CHECK(opt.local_minima == 1);
  const double best = theta_uniform(opt.r_star, 0.9, 1.0).total();
  CHECK(best <= theta_uniform(opt.r_star - 0.01, 0.9, 1.0).total());
  CHECK(best <= theta_uniform(opt.r_star + 0.01, 0.9, 1.0).total());
  CHECK(opt.theta_star == doctest::Approx(best));
}

TEST_CASE("golden section agrees with a dense grid") {
  for (double lambda : {0.3, 0.6, 0.9}) {
    const auto opt = optimal_rate(lambda, 1.0);
    double grid_best = 0.0, grid_theta = INFINITY;
    for (int k = 1; k < 1000; ++k) {
      const double r = k * 1e-3;
      const double th = theta_uniform(r, lambda, 1.0).total();
      if (th < grid_theta) grid_theta = th, grid_best = r;
    }
    CHECK(std::abs(opt.r_star - grid_best) <= 1e-3);
    CHECK(std::abs(opt.r_star - grid_best) <= opt.grid_spacing);
  }
}

TEST_CASE("local certificate at tol") {
  const double tol = 1e-4;
  const auto opt = optimal_rate(0.6, 2.0, tol);
  const double best = theta_uniform(opt.r_star, 0.6, 2.0).total();
  CHECK(best <= theta_uniform(opt.r_star - tol, 0.6, 2.0).total());
  CHECK(best <= theta_uniform(opt.r_star + tol, 0.6, 2.0).total());
}

TEST_CASE("brackets are trimmed to the stable region") {
  const auto opt = optimal_rate(0.9, 1.0, {0.0, 5.0});
  CHECK(opt.r_star == doctest::Approx(optimal_rate(0.9, 1.0).r_star).epsilon(1e-3));
  CHECK_THROWS_AS(optimal_rate(0.9, 1.0, {0.8, 0.2}), ParameterError);
}

TEST_CASE("optimal thresholds") {
  const std::pair<double, int> table[] = {{0.3, 1}, {0.5, 1}, {0.7, 2}, {0.9, 2}, {1.5, 3},
                                          {2.0, 4}, {3.0, 6}, {4.0, 8}, {5.0, 10}};
  for (const auto& [lambda, beta] : table) {
    CAPTURE(lambda);
    CHECK(optimal_threshold(lambda, 1.0).beta_star == beta);
  }
  CHECK(optimal_threshold(2.0, 1.0).beta_min == 3);
  CHECK_THROWS_AS(optimal_threshold(2.0, 1.0, 1), InfeasibleError);
}

TEST_CASE("a larger search range never worsens the optimum") {
  for (double lambda : {0.5, 2.5, 4.0}) {
    double prev = INFINITY;
    for (int cap : {5, 8, 12, 20, 64}) {
      if (cap <= lambda) continue;
      const double th = optimal_threshold(lambda, 1.0, cap).theta_star;
      CHECK(th <= prev);
      prev = th;
    }
  }
}
