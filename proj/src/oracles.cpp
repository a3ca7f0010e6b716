#include "recon/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace recon::oracle {

ChainSolve erlang_chain_bruteforce(int beta, double lambda, double mu, int k_max) {
  if (beta < 1 || k_max < 1) throw std::invalid_argument("beta and k_max must be >= 1");
  const int n = (k_max + 1) * beta;
  auto id = [beta](int k, int b) { return k * beta + b; };

  // Generator Q: phase b counts events since the last sample; the beta-th event emits a
  // sample, which joins the queue. Arrivals beyond k_max are dropped.
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k <= k_max; ++k) {
    for (int b = 0; b < beta; ++b) {
      const int s = id(k, b);
      if (b < beta - 1) {
        Q(s, id(k, b + 1)) += lambda;
      } else if (k < k_max) {
        Q(s, id(k + 1, 0)) += lambda;
      } else {
        Q(s, id(k, 0)) += lambda;
      }
      if (k > 0) Q(s, id(k - 1, b)) += mu;
    }
  }
  for (int s = 0; s < n; ++s) Q(s, s) = -Q.row(s).sum() + Q(s, s);

  // pi Q = 0, sum pi = 1: transpose and swap one equation for the normalization.
  Eigen::MatrixXd A = Q.transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  A.row(n - 1).setOnes();
  rhs(n - 1) = 1.0;
  const Eigen::VectorXd pi = A.partialPivLu().solve(rhs);

  ChainSolve out;
  out.balance_residual = (pi.transpose() * Q).cwiseAbs().maxCoeff();
  out.observed_pmf.assign(k_max + 1, 0.0);
  double mass = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    out.observed_pmf[k] = pi(id(k, beta - 1));
    mass += out.observed_pmf[k];
  }
  for (int k = 0; k <= k_max; ++k) {
    out.observed_pmf[k] /= mass;
    out.mean_queue += k * out.observed_pmf[k];
  }
  out.mean_wait = out.mean_queue / mu;
  return out;
}

double bisection_sigma(double r, double mu) {
  auto g = [&](double s) { return s - std::exp(-(mu / r) * (1.0 - s)); };
  double lo = 0.0;
  double hi = 1.0 - 1e-9;
  if (!(g(hi) > 0.0)) throw std::domain_error("no interior root: r >= mu");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double bisection_z0(int beta, double lambda, double mu) {
  const double rho = lambda / mu;
  auto poly = [&](double z) {
    return rho * std::pow(z, beta + 1) - (1.0 + rho) * std::pow(z, beta) + 1.0;
  };
  // The polynomial vanishes at z = 1, dips negative and comes back up at z0.
  double hi = 2.0;
  while (poly(hi) <= 0.0) hi *= 2.0;
  double lo = 1.0 + 1e-7;
  if (!(poly(lo) < 0.0)) throw std::domain_error("no root above 1: lambda >= beta mu");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (poly(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double riemann_difference(const StepTrace& a, const StepTrace& b, double T, double dt) {
  const auto steps = static_cast<std::int64_t>(std::ceil(T / dt));
  double sum = 0.0;
  for (std::int64_t i = 0; i < steps; ++i) {
    const double left = static_cast<double>(i) * dt;
    const double right = std::min(T, left + dt);
    const double mid = 0.5 * (left + right);
    sum += (static_cast<double>(a.value_at(mid)) - static_cast<double>(b.value_at(mid))) *
           (right - left);
  }
  return sum;
}

std::vector<double> lindley_replay(std::span<const double> times, std::span<const double> services) {
  if (times.size() != services.size()) throw std::invalid_argument("size mismatch");
  std::vector<double> waits(times.size(), 0.0);
  for (std::size_t i = 1; i < times.size(); ++i) {
    waits[i] = std::max(0.0, waits[i - 1] + services[i - 1] - (times[i] - times[i - 1]));
  }
  return waits;
}

double periodic_aoi(double period, double delay, std::int64_t count) {
  const double T = delay + static_cast<double>(count) * period;
  const double area = 0.5 * delay * delay +
                      static_cast<double>(count) * period * (delay + 0.5 * period);
  return area / T;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace recon::oracle
