#pragma once

// Independent reference computations. Each one takes a different route from the
// production code it checks, so agreement means something.

#include <cstdint>
#include <span>
#include <vector>

#include "recon/step_trace.hpp"

namespace recon::oracle {

/// Direct solution of the truncated (queue length <= k_max) joint queue-phase chain of
/// the threshold policy: the balance equations are assembled as a dense generator and
/// solved by LU. The observed distribution is the queue length an arriving sample sees.
struct ChainSolve {
  std::vector<double> observed_pmf;  // index k = 0..k_max
  double mean_queue = 0.0;
  double mean_wait = 0.0;
  double balance_residual = 0.0;  // max |pi Q| of the solution
};

ChainSolve erlang_chain_bruteforce(int beta, double lambda, double mu, int k_max = 200);

/// Plain bisection for the D/M/1 root in (0, 1); 200 halvings.
double bisection_sigma(double r, double mu);

/// Plain bisection for the E_beta/M/1 root z0 > 1 on the undivided polynomial.
double bisection_z0(int beta, double lambda, double mu);

/// Midpoint Riemann sum of a(t) - b(t) over [0, T] with step dt.
double riemann_difference(const StepTrace& a, const StepTrace& b, double T, double dt);

/// Waits replayed from generation times and service times: w_1 = 0,
/// w_{i+1} = max(0, w_i + v_i - (t_{i+1} - t_i)).
std::vector<double> lindley_replay(std::span<const double> times, std::span<const double> services);

/// Mean AoI over [0, c + K p] for samples generated at 0, p, ..., (K-1)p and each
/// delivered exactly c later (c <= p).
double periodic_aoi(double period, double delay, std::int64_t count);

/// Ordinary least squares of y on x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace recon::oracle
