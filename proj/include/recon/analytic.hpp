#pragma once

#include <cstdint>
#include <optional>

#include "recon/policy.hpp"

namespace recon {

/// Average distortion split by cause: sampling (sub-polygon A), queueing wait (B) and
/// service or transmission (C). Each term is already scaled to a time average.
struct DistortionBreakdown {
  double sampling = 0.0;
  double waiting = 0.0;
  double service = 0.0;

  double total() const noexcept { return sampling + waiting + service; }
};

// ---------------------------------------------------------------------------
// Queue roots

/// Root sigma in (0, 1) of sigma = exp(-(mu/r)(1 - sigma)), the D/M/1 delay parameter.
/// Safeguarded Newton with bisection fallback. Throws InstabilityError when r >= mu.
double solve_sigma(double r, double mu);

/// |sigma - exp(-(mu/r)(1 - sigma))|.
double sigma_residual(double sigma, double r, double mu) noexcept;

/// The unique real root z0 > 1 of (lambda/mu) z^{beta+1} - (1 + lambda/mu) z^beta + 1.
/// Bisection on (1 + 1e-12, Z) with Z doubled until the polynomial is positive.
/// Throws InstabilityError when lambda >= beta mu.
double solve_z0(int beta, double lambda, double mu);

/// Characteristic polynomial at z, divided by z^beta so the value stays finite for
/// large thresholds: (lambda/mu) z - (1 + lambda/mu) + z^{-beta}.
double z0_scaled_residual(int beta, double lambda, double mu, double z) noexcept;

/// Solved queue parameters for one sampling policy. Immutable after solving.
struct AnalyticModel {
  double lambda = 0.0;
  double mu = 0.0;
  Policy policy;
  std::optional<double> sigma;  // uniform only
  std::optional<double> z0;     // threshold only

  /// Validates, then solves sigma or z0 as the policy requires.
  static AnalyticModel solve(double lambda, double mu, const Policy& policy);
};

// ---------------------------------------------------------------------------
// Closed-form average distortion

/// lambda (1/(2r) + sigma/(mu(1-sigma)) + 1/mu).
DistortionBreakdown theta_uniform(double r, double lambda, double mu);

/// lambda ((beta-1)/(2 lambda) + 1/(mu(z0^beta - 1)) + 1/mu).
DistortionBreakdown theta_threshold(int beta, double lambda, double mu);

/// 2 lambda / mu; half sampling, half transmission. No stability constraint.
DistortionBreakdown theta_zero_wait(double lambda, double mu);

DistortionBreakdown theta(const AnalyticModel& model);

/// Expected sub-polygon areas per uniform sampling interval.
struct PolygonAreas {
  double s_a = 0.0;
  double s_b = 0.0;
  double s_c = 0.0;

  double total() const noexcept { return s_a + s_b + s_c; }
};

/// (lambda/(2r^2), (lambda/r) sigma/(mu(1-sigma)), lambda/(r mu)).
PolygonAreas mean_polygon_areas_uniform(double r, double lambda, double mu);

// ---------------------------------------------------------------------------
// Delay density and the E_beta/M/1 chain

/// p(x) = sigma mu (1-sigma) exp(-mu (1-sigma) x) on x >= 0, used verbatim by the
/// interpolation lower bound. Note its total mass is sigma, not 1.
struct DelayDistribution {
  double sigma = 0.0;
  double mu = 0.0;

  double decay() const noexcept { return mu * (1.0 - sigma); }
  double density(double x) const noexcept;
  double total_mass() const noexcept { return sigma; }

  /// Closed form of the integral over [d, inf) of (x - d/2) p(x).
  double shifted_tail_moment(double d) const noexcept;
};

/// Observed-state solution of the joint queue-phase chain of the threshold policy.
struct ErlangChainSolution {
  int beta = 1;
  double lambda = 0.0;
  double mu = 0.0;
  double z0 = 0.0;
  double observed_mass = 0.0;  // sum over k of pi_{k,0}
  double mean_queue = 0.0;     // 1/(z0^beta - 1)
  double mean_wait = 0.0;      // mean_queue / mu

  /// Unnormalized pi_{k,0} = (lambda/(beta mu)) (z0 - 1) z0^{-k beta - 1}.
  double pi_k0(std::int64_t k) const noexcept;

  /// Normalized pi*_{k,0} = z0^{-k beta} (1 - z0^{-beta}).
  double observed_pmf(std::int64_t k) const noexcept;
};

ErlangChainSolution erlang_chain(int beta, double lambda, double mu);

// ---------------------------------------------------------------------------
// Interpolation lower bound

struct LowerBoundResult {
  double theta = 0.0;        // r (S1 + S2)
  double s1 = 0.0;           // polygons whose predecessor is delivered after t_i
  double s2 = 0.0;           // polygons whose predecessor is delivered before t_i
  int terms = 0;             // Poisson terms summed
  double tail_weight = 0.0;  // P(N(d) > terms) at truncation
  bool converged = false;    // tail criterion met before n_max
};

/// Lower bound on the average distortion of any interpolating reconstruction under
/// uniform sampling. S1 uses the closed-form tail moment; S2 uses adaptive Simpson on
/// [0, d] per Poisson term. Terms stop once P(N(d) > n) < tol * (partial sum) or at n_max.
LowerBoundResult lower_bound_theta(double r, double lambda, double mu, int n_max = 1000,
                                   double tol = 1e-9);

/// Inner sum of the single-expression form of the bound: either stopped at m = n
/// (consistent with the S2 decomposition) or run to infinity as printed.
enum class InnerSum { up_to_n, unbounded };

/// The bound as one expression, evaluated by a second route: Poisson sums swapped
/// (sum_n P(N(d)=n) sum_{m<=n} = sum_m P(N(d)>=m)) and all integrals by composite
/// Gauss-Legendre. With InnerSum::up_to_n it must agree with lower_bound_theta.
double lower_bound_theta_flattened(double r, double lambda, double mu,
                                   InnerSum inner = InnerSum::up_to_n);

// ---------------------------------------------------------------------------

/// Probability that N(d) exceeds the 2^k - 1 values a k-bit packet can carry.
double overflow_probability(int k_bits, double lambda, double d);

/// Poisson pmf, evaluated in log space.
double poisson_pmf(std::int64_t n, double mean) noexcept;

}  // namespace recon
