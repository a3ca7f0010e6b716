#pragma once

#include <functional>

namespace recon::numeric {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Adaptive Simpson quadrature on [a, b] to absolute tolerance `tol`.
/// Throws NumericalError if the recursion depth is exhausted or a value is non-finite.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol, int max_depth = 50);

/// Composite Gauss-Legendre rule: `panels` equal sub-intervals, `order` nodes each.
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels,
                      int order = 20);

struct MinimumResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

/// Golden-section search for a minimum of a unimodal function on [a, b], stopping once
/// the bracket is shorter than `tol`.
MinimumResult golden_section_minimize(const std::function<double(double)>& f, double a,
                                      double b, double tol);

}  // namespace recon::numeric
