#include "recon/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "recon/analytic.hpp"
#include "recon/errors.hpp"
#include "recon/numeric.hpp"

namespace recon {

namespace {

constexpr int kGridPoints = 64;

double theta_at(double r, double lambda, double mu) {
  const double value = theta_uniform(r, lambda, mu).total();
  if (!std::isfinite(value)) {
    throw NumericalError("non-finite distortion at r=" + std::to_string(r));
  }
  return value;
}

}  // namespace

RateOptimum optimal_rate(double lambda, double mu, std::pair<double, double> bracket,
                         double tol) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw ParameterError("lambda and mu must be positive");
  if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
  double lo = std::max(bracket.first, 1e-6 * mu);
  double hi = std::min(bracket.second, mu - 1e-6);
  if (!(hi > lo)) throw ParameterError("empty rate bracket after trimming to (0, mu)");

  std::array<double, kGridPoints> xs{};
  std::array<double, kGridPoints> ys{};
  const double h = (hi - lo) / (kGridPoints - 1);
  for (int i = 0; i < kGridPoints; ++i) {
    xs[i] = i == kGridPoints - 1 ? hi : lo + i * h;
    ys[i] = theta_at(xs[i], lambda, mu);
  }
  const int best = static_cast<int>(std::min_element(ys.begin(), ys.end()) - ys.begin());

  RateOptimum out;
  out.grid_argmin = xs[best];
  out.grid_spacing = h;
  for (int i = 1; i + 1 < kGridPoints; ++i) {
    if (ys[i] < ys[i - 1] && ys[i] <= ys[i + 1]) ++out.local_minima;
  }
  out.multimodal = out.local_minima > 1;

  const double a = xs[std::max(best - 1, 0)];
  const double b = xs[std::min(best + 1, kGridPoints - 1)];
  const auto refined = numeric::golden_section_minimize(
      [&](double r) { return theta_at(r, lambda, mu); }, a, b, tol);
  if (refined.fx <= ys[best]) {
    out.r_star = refined.x;
    out.theta_star = refined.fx;
  } else {
    out.r_star = xs[best];
    out.theta_star = ys[best];
  }
  return out;
}

RateOptimum optimal_rate(double lambda, double mu, double tol) {
  return optimal_rate(lambda, mu, {0.0, mu}, tol);
}

ThresholdOptimum optimal_threshold(double lambda, double mu, int beta_max) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw ParameterError("lambda and mu must be positive");
  const double load = lambda / mu;
  ThresholdOptimum out;
  out.beta_min = static_cast<int>(std::floor(load)) + 1;  // smallest beta with lambda < beta mu
  if (out.beta_min > beta_max) {
    throw InfeasibleError("no stable threshold up to beta_max=" + std::to_string(beta_max) +
                          " (need beta > lambda/mu = " + std::to_string(load) + ")");
  }
  out.theta_star = INFINITY;
  for (int beta = out.beta_min; beta <= beta_max; ++beta) {
    const double value = theta_threshold(beta, lambda, mu).total();
    if (value < out.theta_star) {
      out.theta_star = value;
      out.beta_star = beta;
    }
  }
  return out;
}

}  // namespace recon
