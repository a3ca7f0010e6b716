#include "recon/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>

#include "recon/analytic.hpp"
#include "recon/experiment.hpp"
#include "recon/optimize.hpp"
#include "recon/oracles.hpp"
#include "recon/simulation.hpp"
#include "recon/step_trace.hpp"

namespace recon::validation {

namespace {

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double relative_error(double estimate, double reference) {
  return std::abs(estimate - reference) / std::abs(reference);
}

struct Summary {
  double mean = 0.0;
  double half_width = 0.0;  // 95% confidence half width
};

Summary summarize(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  Summary s;
  for (double x : xs) s.mean += x;
  s.mean /= n;
  if (xs.size() < 2) return s;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  // Student t quantile for 19 degrees of freedom; the suite always uses 20 seeds.
  const double t = xs.size() == 20 ? 2.093 : 1.96;
  s.half_width = t * std::sqrt(ss / (n - 1) / n);
  return s;
}

double mean_theta_hat(double lambda, double mu, const Policy& policy, double horizon, int reps) {
  double sum = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    SimConfig cfg;
    cfg.lambda = lambda;
    cfg.mu = mu;
    cfg.policy = policy;
    cfg.horizon = horizon;
    cfg.seed = static_cast<std::uint64_t>(rep + 1);
    sum += simulate(cfg).theta_hat;
  }
  return sum / reps;
}

CriterionResult uniform_sim_vs_closed_form() {
  CriterionResult res;
  double worst = 0.0;
  double worst_r = 0.0;
  for (int k = 1; k <= 9; ++k) {
    const double r = k / 10.0;
    const double sim = mean_theta_hat(0.9, 1.0, UniformPolicy{r}, 1e5, 5);
    const double err = relative_error(sim, theta_uniform(r, 0.9, 1.0).total());
    if (err > worst) worst = err, worst_r = r;
  }
  res.passed = worst < 0.03;
  res.detail = fmt("max relative error %.4f at r=%.1f (limit 0.03)", worst, worst_r);
  return res;
}

CriterionResult mm1_reduction() {
  CriterionResult res;
  double worst = 0.0;
  for (double mu : {0.5, 1.0, 2.0, 3.0, 5.0}) {
    for (double load : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double lambda = load * mu;
      const double expected = lambda * (lambda / (mu * (mu - lambda)) + 1.0 / mu);
      worst = std::max(worst, std::abs(theta_threshold(1, lambda, mu).total() - expected));
    }
  }
  res.passed = worst < 1e-10;
  res.detail = fmt("max abs difference %.3e over 25 points (limit 1e-10)", worst);
  return res;
}

CriterionResult zero_wait_constant() {
  CriterionResult res;
  SimConfig cfg;
  cfg.lambda = 0.9;
  cfg.mu = 1.0;
  cfg.policy = ZeroWaitPolicy{};
  cfg.horizon = 1e6;
  cfg.seed = 1;
  const double th = simulate(cfg).theta_hat;
  res.passed = th >= 1.764 && th <= 1.836;
  res.detail = fmt("theta_hat %.5f (band [1.764, 1.836])", th);
  return res;
}

CriterionResult root_residuals() {
  CriterionResult res;
  double worst_sigma = 0.0;
  double worst_z0 = 0.0;
  bool in_range = true;
  int points = 0;
  for (double mu : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    for (int k = 1; k <= 10; ++k) {
      const double r = mu * (k / 10.5);
      const double s = solve_sigma(r, mu);
      in_range = in_range && s > 0.0 && s < 1.0;
      worst_sigma = std::max(worst_sigma, sigma_residual(s, r, mu));
      ++points;
    }
  }
  for (int beta : {1, 2, 3, 5, 8}) {
    for (int k = 1; k <= 10; ++k) {
      const double lambda = beta * (k / 10.5);
      const double z0 = solve_z0(beta, lambda, 1.0);
      in_range = in_range && z0 > 1.0;
      worst_z0 = std::max(worst_z0, std::abs(z0_scaled_residual(beta, lambda, 1.0, z0)));
      ++points;
    }
  }
  res.passed = in_range && worst_sigma < 1e-10 && worst_z0 < 1e-10;
  res.detail = fmt("%d points; max sigma residual %.2e, max z0 residual %.2e, roots in range: %s",
                   points, worst_sigma, worst_z0, in_range ? "yes" : "no");
  return res;
}

CriterionResult optimal_rate_location() {
  CriterionResult res;
  const RateOptimum opt = optimal_rate(0.9, 1.0);
  double best_r = 0.0;
  double best = INFINITY;
  for (int k = 1; k <= 19; ++k) {
    const double r = k / 20.0;
    const double sim = mean_theta_hat(0.9, 1.0, UniformPolicy{r}, 1e5, 5);
    if (sim < best) best = sim, best_r = r;
  }
  const bool in_window = opt.r_star >= 0.47 && opt.r_star <= 0.57;
  const bool agrees = std::abs(best_r - opt.r_star) <= 0.1;
  res.passed = in_window && agrees;
  res.detail = fmt("r*=%.4f (window [0.47, 0.57]); simulated argmin r=%.2f (within 0.1: %s)",
                   opt.r_star, best_r, agrees ? "yes" : "no");
  return res;
}

CriterionResult optimal_thresholds() {
  CriterionResult res;
  const std::pair<double, int> table[] = {{0.3, 1}, {0.5, 1}, {0.7, 2}, {0.9, 2}, {1.5, 3},
                                          {2.0, 4}, {3.0, 6}, {4.0, 8}, {5.0, 10}};
  std::ostringstream got;
  res.passed = true;
  for (const auto& [lambda, expected] : table) {
    const int beta = optimal_threshold(lambda, 1.0).beta_star;
    got << beta << ' ';
    res.passed = res.passed && beta == expected;
  }
  res.detail = "beta* = " + got.str() + "(expected 1 1 2 2 3 4 6 8 10)";
  return res;
}

CriterionResult erlang_chain_oracle() {
  CriterionResult res;
  double worst = 0.0;
  for (int beta : {1, 2, 3, 5}) {
    for (double load : {0.3, 0.6, 0.9}) {
      const double lambda = load * beta;
      const double closed = erlang_chain(beta, lambda, 1.0).mean_queue;
      const double direct = oracle::erlang_chain_bruteforce(beta, lambda, 1.0, 200).mean_queue;
      worst = std::max(worst, std::abs(closed - direct));
    }
  }
  res.passed = worst < 1e-6;
  res.detail = fmt("max |E{q} closed form - direct solve| %.3e over 12 cases (limit 1e-6)", worst);
  return res;
}

CriterionResult lower_bound_below_theta() {
  CriterionResult res;
  double min_gap = INFINITY;
  for (int k = 1; k <= 9; ++k) {
    const double r = k / 10.0;
    min_gap = std::min(min_gap, theta_uniform(r, 0.9, 1.0).total() -
                                    lower_bound_theta(r, 0.9, 1.0).theta);
  }
  res.passed = min_gap >= 0.0;
  res.detail = fmt("min theta - lower bound over r=0.1..0.9: %.5f", min_gap);
  return res;
}

CriterionResult lower_bound_vs_oracle() {
  CriterionResult res;
  SimConfig cfg;
  cfg.lambda = 0.9;
  cfg.mu = 1.0;
  cfg.policy = UniformPolicy{0.5};
  cfg.horizon = 1e6;
  cfg.seed = 1;
  cfg.interpolation = InterpolationMode::oracle;
  const double mc = simulate(cfg).theta_hat;
  const double bound = lower_bound_theta(0.5, 0.9, 1.0).theta;
  const double err = relative_error(mc, bound);
  res.passed = err < 0.05;
  res.detail = fmt("oracle MC %.5f vs lower bound %.5f: relative gap %.3f (limit 0.05)", mc,
                   bound, err);
  return res;
}

CriterionResult interpolation_benefit() {
  CriterionResult res;
  res.passed = true;
  std::ostringstream detail;
  for (double r : {0.05, 0.1, 0.2}) {
    std::vector<double> off, single, uniform;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      SimConfig cfg;
      cfg.lambda = 0.9;
      cfg.mu = 1.0;
      cfg.policy = UniformPolicy{r};
      cfg.horizon = 1e5;
      cfg.seed = seed;
      const SimulationRun run = run_pipeline(cfg);
      off.push_back(score_run(run, InterpolationMode::off).abs_theta_hat);
      single.push_back(score_run(run, InterpolationMode::single_point).abs_theta_hat);
      uniform.push_back(score_run(run, InterpolationMode::uniform_j).abs_theta_hat);
    }
    const Summary a = summarize(off), b = summarize(single), c = summarize(uniform);
    const bool ordered = a.mean > b.mean && b.mean > c.mean;
    const bool separated = a.mean - a.half_width > c.mean + c.half_width;
    res.passed = res.passed && ordered && separated;
    detail << fmt("r=%.2f off %.3f±%.3f single %.3f±%.3f uniform %.3f±%.3f; ", r, a.mean,
                  a.half_width, b.mean, b.half_width, c.mean, c.half_width);
  }
  res.detail = detail.str();
  return res;
}

CriterionResult polygon_reconciliation() {
  CriterionResult res;
  double worst = 0.0;
  auto reconcile = [&](const SimulationRun& run) {
    const StepTrace truth = StepTrace::counting(run.source);
    const StepTrace monitor = plain_reconstruction(run.packets);
    const double integral = integrate_difference(truth, monitor, run.config.horizon).signed_area;
    const double parts = decompose_polygons(run).totals.total();
    worst = std::max(worst, relative_error(parts, integral));
  };
  SimConfig cfg;
  cfg.lambda = 0.9;
  cfg.mu = 1.0;
  cfg.horizon = 1e5;
  for (Policy policy : {Policy{ThresholdPolicy{2}}, Policy{ZeroWaitPolicy{}}}) {
    cfg.policy = policy;
    reconcile(run_pipeline(cfg));
  }
  cfg.policy = UniformPolicy{0.5};
  cfg.horizon = 1e6;
  const SimulationRun run = run_pipeline(cfg);
  reconcile(run);
  const double s_a = decompose_polygons(run).complete_means.s_a;
  const double expected = 0.9 / (2.0 * 0.5 * 0.5);
  const double s_a_err = relative_error(s_a, expected);
  res.passed = worst < 1e-6 && s_a_err < 0.03;
  res.detail = fmt("max reconciliation error %.2e (limit 1e-6); mean S_A %.4f vs %.4f, "
                   "relative error %.4f (limit 0.03)",
                   worst, s_a, expected, s_a_err);
  return res;
}

CriterionResult determinism() {
  CriterionResult res;
  ExperimentSpec spec;
  spec.command = Command::sweep;
  spec.policy = "uniform";
  spec.lambdas = {0.9};
  spec.mus = {1.0};
  spec.rates = {0.3, 0.6};
  spec.interpolations = {InterpolationMode::off, InterpolationMode::uniform_j};
  spec.horizon = 1e4;
  spec.replications = 2;
  spec.seed = 7;
  spec.workers = 2;
  const std::string first = csv_body(run_experiment(spec).records);
  const std::string second = csv_body(run_experiment(spec).records);
  spec.workers = 1;
  const std::string serial = csv_body(run_experiment(spec).records);
  res.passed = !first.empty() && first == second && first == serial;
  res.detail = fmt("%zu-byte CSV body; repeat identical: %s; serial identical: %s", first.size(),
                   first == second ? "yes" : "no", first == serial ? "yes" : "no");
  return res;
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"1", "uniform policy: simulation vs closed form", uniform_sim_vs_closed_form},
      {"2", "threshold beta=1 reduces to M/M/1", mm1_reduction},
      {"3", "zero-wait distortion 2 lambda/mu", zero_wait_constant},
      {"4", "sigma and z0 root residuals", root_residuals},
      {"5", "optimal sampling rate", optimal_rate_location},
      {"6", "optimal thresholds", optimal_thresholds},
      {"7", "E_beta/M/1 chain vs direct solve", erlang_chain_oracle},
      {"8a", "lower bound <= closed-form distortion", lower_bound_below_theta},
      {"8b", "oracle reconstruction matches lower bound", lower_bound_vs_oracle},
      {"9", "interpolation lowers distortion", interpolation_benefit},
      {"10", "sub-polygon reconciliation and mean S_A", polygon_reconciliation},
      {"11", "byte-identical CSV on rerun", determinism},
  };
  return all;
}

std::vector<CriterionResult> run_suite(const std::vector<std::string>& only) {
  std::vector<CriterionResult> results;
  for (const auto& c : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult res;
    try {
      res = c.run();
    } catch (const std::exception& e) {
      res.passed = false;
      res.detail = std::string("threw: ") + e.what();
    }
    res.id = c.id;
    res.name = c.name;
    res.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(res));
  }
  return results;
}

std::string format_result(const CriterionResult& result) {
  return fmt("%s  %-3s %-44s (%6.1f s)  ", result.passed ? "PASS" : "FAIL", result.id.c_str(),
             result.name.c_str(), result.seconds) +
         result.detail;
}

}  // namespace recon::validation
