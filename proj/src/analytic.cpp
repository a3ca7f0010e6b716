#include "recon/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "recon/errors.hpp"
#include "recon/numeric.hpp"

namespace recon {

namespace {

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ParameterError(std::string(name) + " must be positive and finite");
  }
}

void require_beta(int beta) {
  if (beta < 1) throw ParameterError("threshold beta must be >= 1");
}

// P(N > n) for N ~ Poisson(mean).
double poisson_upper_tail(std::int64_t n, double mean) {
  if (n < 0) return 1.0;
  if (mean == 0.0) return 0.0;
  return boost::math::gamma_p(static_cast<double>(n) + 1.0, mean);
}

// sum_{m=1}^{n} m P(N(x) = m) for N(x) ~ Poisson(rate x).
double truncated_first_moment(std::int64_t n, double mean) {
  if (mean <= 0.0 || n < 1) return 0.0;
  double sum = 0.0;
  if (mean < 500.0) {
    double pm = std::exp(-mean);
    for (std::int64_t m = 1; m <= n; ++m) {
      pm *= mean / static_cast<double>(m);
      sum += static_cast<double>(m) * pm;
    }
  } else {
    for (std::int64_t m = 1; m <= n; ++m) sum += static_cast<double>(m) * poisson_pmf(m, mean);
  }
  return sum;
}

}  // namespace

double poisson_pmf(std::int64_t n, double mean) noexcept {
  if (n < 0) return 0.0;
  if (mean <= 0.0) return n == 0 ? 1.0 : 0.0;
  return boost::math::pdf(boost::math::poisson_distribution<>(mean), static_cast<double>(n));
}

// ---------------------------------------------------------------------------

double sigma_residual(double sigma, double r, double mu) noexcept {
  return std::abs(sigma - std::exp(-(mu / r) * (1.0 - sigma)));
}

double solve_sigma(double r, double mu) {
  require_positive(r, "sampling rate r");
  require_positive(mu, "service rate mu");
  if (r >= mu) {
    throw InstabilityError("D/M/1 queue is unstable: sampling rate r must be below mu");
  }
  const double k = mu / r;
  auto g = [k](double s) { return s - std::exp(-k * (1.0 - s)); };
  auto dg = [k](double s) { return 1.0 - k * std::exp(-k * (1.0 - s)); };

  // g < 0 left of the root and > 0 between the root and 1 (g is concave, g(1) = 0).
  // sigma ~ exp(-mu/r); below the double range it is reported as the smallest positive
  // double, which keeps sigma in (0, 1) with a zero residual.
  if (std::exp(-k) == 0.0) return std::numeric_limits<double>::denorm_min();

  double lo = 0.0;
  double hi = 1.0 - 1e-14;
  double s = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double gs = g(s);
    if (gs == 0.0) break;
    (gs < 0.0 ? lo : hi) = s;
    const double slope = dg(s);
    double next = slope > 0.0 ? s - gs / slope : 0.5 * (lo + hi);
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    const bool done = std::abs(next - s) <= 4.0 * std::numeric_limits<double>::epsilon() * next;
    s = next;
    if (done) break;
  }
  if (!(s > 0.0 && s < 1.0) || sigma_residual(s, r, mu) > 1e-12) {
    throw NumericalError("solve_sigma failed to converge for r=" + std::to_string(r) +
                         ", mu=" + std::to_string(mu));
  }
  return s;
}

double z0_scaled_residual(int beta, double lambda, double mu, double z) noexcept {
  const double rho = lambda / mu;
  return std::abs(rho * z - (1.0 + rho) + std::pow(z, -beta));
}

double solve_z0(int beta, double lambda, double mu) {
  require_beta(beta);
  require_positive(lambda, "arrival rate lambda");
  require_positive(mu, "service rate mu");
  const double rho = lambda / mu;
  if (rho >= static_cast<double>(beta)) {
    throw InstabilityError("E_beta/M/1 queue is unstable: lambda must be below beta * mu");
  }
  // For z > 1 the polynomial equals (z - 1) z^beta (rho - sum_{i=1}^{beta} z^{-i}); the
  // bracket only needs the sign of the last factor, which never overflows.
  auto sign_factor = [rho, beta](double z) {
    double term = 1.0;
    double sum = 0.0;
    for (int i = 0; i < beta; ++i) {
      term /= z;
      sum += term;
    }
    return rho - sum;
  };

  double lo = 1.0 + 1e-12;
  if (sign_factor(lo) >= 0.0) lo = 1.0;  // root closer to 1 than the nominal bracket
  double hi = 2.0;
  while (sign_factor(hi) <= 0.0) {
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericalError("solve_z0: failed to bracket the root");
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (sign_factor(mid) < 0.0 ? lo : hi) = mid;
  }
  const double z = std::abs(sign_factor(lo)) < std::abs(sign_factor(hi)) ? lo : hi;
  if (!(z > 1.0)) throw NumericalError("solve_z0: root collapsed onto z = 1");
  return z;
}

AnalyticModel AnalyticModel::solve(double lambda, double mu, const Policy& policy) {
  require_positive(lambda, "arrival rate lambda");
  require_positive(mu, "service rate mu");
  validate_policy(policy);
  AnalyticModel model{lambda, mu, policy, std::nullopt, std::nullopt};
  if (const auto* u = std::get_if<UniformPolicy>(&policy)) {
    model.sigma = solve_sigma(u->rate, mu);
  } else if (const auto* t = std::get_if<ThresholdPolicy>(&policy)) {
    model.z0 = solve_z0(t->beta, lambda, mu);
  }
  return model;
}

// ---------------------------------------------------------------------------

DistortionBreakdown theta_uniform(double r, double lambda, double mu) {
  require_positive(lambda, "arrival rate lambda");
  const double sigma = solve_sigma(r, mu);
  return {lambda / (2.0 * r), lambda * sigma / (mu * (1.0 - sigma)), lambda / mu};
}

DistortionBreakdown theta_threshold(int beta, double lambda, double mu) {
  const double z0 = solve_z0(beta, lambda, mu);
  const double zb_minus_1 = std::expm1(beta * std::log(z0));
  return {(beta - 1) / 2.0, lambda / (mu * zb_minus_1), lambda / mu};
}

DistortionBreakdown theta_zero_wait(double lambda, double mu) {
  require_positive(lambda, "arrival rate lambda");
  require_positive(mu, "service rate mu");
  return {lambda / mu, 0.0, lambda / mu};
}

DistortionBreakdown theta(const AnalyticModel& model) {
  return std::visit(
      [&](const auto& p) -> DistortionBreakdown {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, UniformPolicy>) {
          const double s = model.sigma.value();
          return {model.lambda / (2.0 * p.rate), model.lambda * s / (model.mu * (1.0 - s)),
                  model.lambda / model.mu};
        } else if constexpr (std::is_same_v<P, ThresholdPolicy>) {
          const double zb_minus_1 = std::expm1(p.beta * std::log(model.z0.value()));
          return {(p.beta - 1) / 2.0, model.lambda / (model.mu * zb_minus_1),
                  model.lambda / model.mu};
        } else {
          return theta_zero_wait(model.lambda, model.mu);
        }
      },
      model.policy);
}

PolygonAreas mean_polygon_areas_uniform(double r, double lambda, double mu) {
  require_positive(lambda, "arrival rate lambda");
  const double sigma = solve_sigma(r, mu);
  const double per_interval = lambda / r;
  return {lambda / (2.0 * r * r), per_interval * sigma / (mu * (1.0 - sigma)),
          per_interval / mu};
}

// ---------------------------------------------------------------------------

double DelayDistribution::density(double x) const noexcept {
  if (x < 0.0) return 0.0;
  const double a = decay();
  return sigma * a * std::exp(-a * x);
}

double DelayDistribution::shifted_tail_moment(double d) const noexcept {
  const double a = decay();
  return sigma * std::exp(-a * d) * (d / 2.0 + 1.0 / a);
}

double ErlangChainSolution::pi_k0(std::int64_t k) const noexcept {
  if (k < 0) return 0.0;
  const double rho = lambda / mu;
  return rho / beta * (z0 - 1.0) * std::exp(-(static_cast<double>(k) * beta + 1.0) * std::log(z0));
}

double ErlangChainSolution::observed_pmf(std::int64_t k) const noexcept {
  if (k < 0) return 0.0;
  const double log_z = std::log(z0);
  return std::exp(-static_cast<double>(k) * beta * log_z) * -std::expm1(-beta * log_z);
}

ErlangChainSolution erlang_chain(int beta, double lambda, double mu) {
  ErlangChainSolution sol;
  sol.beta = beta;
  sol.lambda = lambda;
  sol.mu = mu;
  sol.z0 = solve_z0(beta, lambda, mu);
  const double zb_minus_1 = std::expm1(beta * std::log(sol.z0));
  sol.mean_queue = 1.0 / zb_minus_1;
  sol.mean_wait = sol.mean_queue / mu;
  // Geometric sum of pi_{k,0} over k >= 0.
  sol.observed_mass = (lambda / mu) / beta * (sol.z0 - 1.0) *
                      std::exp((beta - 1) * std::log(sol.z0)) / zb_minus_1;
  return sol;
}

// ---------------------------------------------------------------------------

LowerBoundResult lower_bound_theta(double r, double lambda, double mu, int n_max, double tol) {
  require_positive(lambda, "arrival rate lambda");
  if (n_max < 1) throw ParameterError("lower_bound_theta: n_max must be >= 1");
  if (!(tol > 0.0)) throw ParameterError("lower_bound_theta: tol must be positive");
  const DelayDistribution delay{solve_sigma(r, mu), mu};
  const double d = 1.0 / r;
  const double mean_events = lambda * d;
  const double tail_moment = delay.shifted_tail_moment(d);

  LowerBoundResult out;
  double prev_tail = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    const double pn = poisson_pmf(n, mean_events);
    out.s1 += n * pn * tail_moment;
    if (pn > 0.0) {
      auto integrand = [&](double x) {
        return 0.5 * x * delay.density(x) * truncated_first_moment(n, lambda * x);
      };
      out.s2 += pn * numeric::adaptive_simpson(integrand, 0.0, d, 1e-10).value;
    }
    out.terms = n;
    const double tail = poisson_upper_tail(n, mean_events);
    if (tail > prev_tail * (1.0 + 1e-12)) {
      throw NumericalError("lower_bound_theta: Poisson tail weight is not decreasing");
    }
    prev_tail = tail;
    out.tail_weight = tail;
    if (tail == 0.0 || tail < tol * (out.s1 + out.s2)) {
      out.converged = true;
      break;
    }
  }
  out.theta = r * (out.s1 + out.s2);
  return out;
}

double lower_bound_theta_flattened(double r, double lambda, double mu, InnerSum inner) {
  require_positive(lambda, "arrival rate lambda");
  const DelayDistribution delay{solve_sigma(r, mu), mu};
  const double d = 1.0 / r;
  const double mean_events = lambda * d;
  const double a = delay.decay();

  // First term: sum_n n P(N(d)=n) = lambda d, times the shifted moment on [d, inf),
  // integrated numerically over [d, d + 60/a].
  const double span = 60.0 / a;
  const double first =
      mean_events * numeric::gauss_legendre(
                        [&](double x) { return (x - d / 2.0) * delay.density(x); }, d, d + span,
                        std::max(64, static_cast<int>(span / d) + 1));

  double second = 0.0;
  if (inner == InnerSum::up_to_n) {
    // P(N(d) >= m), m = 1, 2, ... until negligible.
    std::vector<double> at_least;
    for (std::int64_t m = 1;; ++m) {
      const double q = poisson_upper_tail(m - 1, mean_events);
      if (q < 1e-20 || m > 100000) break;
      at_least.push_back(q);
    }
    auto integrand = [&](double x) {
      const double mx = lambda * x;
      double sum = 0.0;
      for (std::size_t i = 0; i < at_least.size(); ++i) {
        const auto m = static_cast<std::int64_t>(i + 1);
        sum += static_cast<double>(m) * poisson_pmf(m, mx) * at_least[i];
      }
      return 0.5 * x * delay.density(x) * sum;
    };
    second = numeric::gauss_legendre(integrand, 0.0, d, 64);
  } else {
    // sum_{m>=1} m P(N(x)=m) = lambda x, and sum_{n>=1} P(N(d)=n) = 1 - e^{-lambda d}.
    second = -std::expm1(-mean_events) *
             numeric::gauss_legendre(
                 [&](double x) { return 0.5 * lambda * x * x * delay.density(x); }, 0.0, d, 64);
  }
  return r * (first + second);
}

// ---------------------------------------------------------------------------

double overflow_probability(int k_bits, double lambda, double d) {
  if (k_bits < 0) throw ParameterError("packet length k must be >= 0 bits");
  require_positive(lambda, "arrival rate lambda");
  require_positive(d, "interval d");
  const double mean = lambda * d;
  // Largest representable count is M = 2^k - 1; failure is N(d) > M.
  if (k_bits >= 1000) return 0.0;
  const double shape = std::ldexp(1.0, k_bits);  // M + 1
  return boost::math::gamma_p(shape, mean);
}

}  // namespace recon
