#pragma once

#include <utility>

namespace recon {

struct RateOptimum {
  double r_star = 0.0;
  double theta_star = 0.0;
  double grid_argmin = 0.0;  // best point of the pre-scan
  double grid_spacing = 0.0;
  int local_minima = 0;      // interior minima found by the pre-scan
  bool multimodal = false;   // more than one local minimum on the grid
};

/// Minimizes the uniform-sampling distortion over r. A 64-point grid scan picks the
/// bracketing triple, then golden-section refines it to `tol`. A bracket reaching
/// mu is trimmed to mu - 1e-6; a lower end <= 0 is raised to 1e-6 mu.
RateOptimum optimal_rate(double lambda, double mu, std::pair<double, double> bracket,
                         double tol = 1e-4);

/// Same, on the default bracket (0, mu).
RateOptimum optimal_rate(double lambda, double mu, double tol = 1e-4);

struct ThresholdOptimum {
  int beta_star = 0;
  double theta_star = 0.0;
  int beta_min = 0;  // smallest stable threshold
};

/// Exhaustive argmin of the threshold-policy distortion over the stable thresholds
/// up to beta_max; ties go to the smaller threshold. Throws InfeasibleError when no
/// threshold up to beta_max is stable.
ThresholdOptimum optimal_threshold(double lambda, double mu, int beta_max = 64);

}  // namespace recon
