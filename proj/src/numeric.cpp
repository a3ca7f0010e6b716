#include "recon/numeric.hpp"

#include <cmath>
#include <vector>

#include "recon/errors.hpp"

namespace recon::numeric {

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  int evaluations = 0;
  double error = 0.0;

  double eval(double x) {
    ++evaluations;
    const double y = f(x);
    if (!std::isfinite(y)) throw NumericalError("non-finite integrand value");
    return y;
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                 int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth <= 0) throw NumericalError("adaptive Simpson exhausted its recursion depth");
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol, int max_depth) {
  if (!(b >= a)) throw ParameterError("adaptive_simpson: inverted interval");
  if (!(tol > 0.0)) throw ParameterError("adaptive_simpson: tolerance must be positive");
  if (a == b) return {};
  SimpsonState state{f};
  const double m = 0.5 * (a + b);
  const double fa = state.eval(a);
  const double fm = state.eval(m);
  const double fb = state.eval(b);
  const double flm = state.eval(0.5 * (a + m));
  const double frm = state.eval(0.5 * (m + b));
  // Always split once so a symmetric integrand cannot fool the first estimate.
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double value = state.recurse(a, m, fa, flm, fm, left, 0.5 * tol, max_depth) +
                       state.recurse(m, b, fm, frm, fb, right, 0.5 * tol, max_depth);
  return {value, state.error, state.evaluations};
}

namespace {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

GaussRule make_gauss_rule(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels,
                      int order) {
  if (!(b >= a)) throw ParameterError("gauss_legendre: inverted interval");
  if (panels < 1 || order < 2) throw ParameterError("gauss_legendre: bad panel count or order");
  const GaussRule rule = make_gauss_rule(order);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    double panel = 0.0;
    for (int i = 0; i < order; ++i) panel += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    total += 0.5 * h * panel;
  }
  if (!std::isfinite(total)) throw NumericalError("gauss_legendre: non-finite result");
  return total;
}

MinimumResult golden_section_minimize(const std::function<double(double)>& f, double a,
                                      double b, double tol) {
  if (!(b > a)) throw ParameterError("golden_section_minimize: empty bracket");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  while (b - a > tol) {
    if (!std::isfinite(fc) || !std::isfinite(fd)) {
      throw NumericalError("golden_section_minimize: non-finite objective");
    }
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++it;
  }
  return fc <= fd ? MinimumResult{c, fc, it} : MinimumResult{d, fd, it};
}

}  // namespace recon::numeric
