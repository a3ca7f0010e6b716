#include "recon/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "recon/analytic.hpp"
#include "recon/errors.hpp"
#include "recon/optimize.hpp"

namespace recon {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <class T>
std::string format_optional(const std::optional<T>& x) {
  if (!x) return {};
  if constexpr (std::is_floating_point_v<T>) {
    return format_double(*x);
  } else {
    return std::to_string(*x);
  }
}

double parse_double(std::string_view text, std::string_view key) {
  const std::string s = trim(text);
  double value = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw ParameterError("invalid number '" + s + "' for " + std::string(key));
  }
  return value;
}

long long parse_integer(std::string_view text, std::string_view key) {
  const std::string s = trim(text);
  long long value = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw ParameterError("invalid integer '" + s + "' for " + std::string(key));
  }
  return value;
}

std::string normalize_policy(std::string_view text) {
  std::string p = trim(text);
  std::replace(p.begin(), p.end(), '-', '_');
  if (p == "zerowait" || p == "zw") p = "zero_wait";
  if (p != "uniform" && p != "threshold" && p != "zero_wait") {
    throw ParameterError("unknown policy '" + std::string(text) + "'");
  }
  return p;
}

// Grid k * step for k = first..last; exact decimals in the CSV.
std::vector<double> decimal_grid(int first, int last, int denominator) {
  std::vector<double> out;
  for (int k = first; k <= last; ++k) out.push_back(static_cast<double>(k) / denominator);
  return out;
}

std::vector<int> int_range(int first, int last) {
  std::vector<int> out;
  for (int k = first; k <= last; ++k) out.push_back(k);
  return out;
}

std::optional<double> param_of(const Policy& policy) {
  if (const auto* u = std::get_if<UniformPolicy>(&policy)) return u->rate;
  if (const auto* t = std::get_if<ThresholdPolicy>(&policy)) return static_cast<double>(t->beta);
  return std::nullopt;
}

std::string policy_label(const GridPoint& p) {
  std::string label = policy_name(p.policy);
  if (p.interpolation != InterpolationMode::off) {
    label += ":interp=";
    label += to_string(p.interpolation);
  }
  return label;
}

struct Overlay {
  std::optional<double> theta;
  std::optional<double> lower_bound;
};

Overlay analytic_overlay(const GridPoint& p) {
  Overlay o;
  try {
    o.theta = theta(AnalyticModel::solve(p.lambda, p.mu, p.policy)).total();
    if (const auto* u = std::get_if<UniformPolicy>(&p.policy)) {
      o.lower_bound = lower_bound_theta(u->rate, p.lambda, p.mu).theta;
    }
  } catch (const InstabilityError&) {
    // Unstable points have no finite closed form; left empty.
  }
  return o;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

// Runs `task(i)` for i in [0, n) on up to `workers` threads; rethrows the first failure.
template <class Task>
void parallel_for(std::size_t n, int workers, Task&& task) {
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(threads, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

json base_summary(const ExperimentSpec& spec) {
  return json{{"command", to_string(spec.command)},
              {"preset", to_string(spec.preset)},
              {"policy", spec.policy},
              {"generated_at", iso_timestamp()},
              {"horizon", spec.horizon},
              {"replications", spec.replications},
              {"base_seed", spec.seed}};
}

std::string hex64(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << x;
  return os.str();
}

ExperimentResult run_simulations(const ExperimentSpec& spec, const std::vector<GridPoint>& grid) {
  const auto reps = static_cast<std::size_t>(spec.replications);
  std::vector<RunRecord> records(grid.size() * reps);
  std::vector<Overlay> overlays(grid.size());

  parallel_for(grid.size(), spec.workers, [&](std::size_t g) { overlays[g] = analytic_overlay(grid[g]); });
  parallel_for(records.size(), spec.workers, [&](std::size_t i) {
    const std::size_t g = i / reps;
    const std::size_t rep = i % reps;
    const GridPoint& p = grid[g];
    SimConfig cfg;
    cfg.lambda = p.lambda;
    cfg.mu = p.mu;
    cfg.policy = p.policy;
    cfg.horizon = spec.horizon;
    cfg.seed = spec.seed + rep;
    cfg.interpolation = p.interpolation;
    RunRecord& rec = records[i];
    rec.point = p;
    rec.seed = cfg.seed;
    rec.horizon = cfg.horizon;
    rec.report = simulate(cfg);
    rec.theta_analytic = overlays[g].theta;
    rec.theta_lower_bound = overlays[g].lower_bound;
  });

  json summary = base_summary(spec);
  json points = json::array();
  std::ostringstream out;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double sum = 0.0, sum_sq = 0.0, abs_sum = 0.0, abs_sq = 0.0, delay = 0.0, aoi = 0.0;
    int delay_n = 0, aoi_n = 0;
    bool unstable = false;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const DistortionReport& r = *records[g * reps + rep].report;
      sum += r.theta_hat;
      sum_sq += r.theta_hat * r.theta_hat;
      abs_sum += r.abs_theta_hat;
      abs_sq += r.abs_theta_hat * r.abs_theta_hat;
      if (r.mean_delay) delay += *r.mean_delay, ++delay_n;
      if (r.mean_aoi) aoi += *r.mean_aoi, ++aoi_n;
      unstable = unstable || r.unstable;
    }
    const double n = static_cast<double>(reps);
    const double mean = sum / n;
    const double abs_mean = abs_sum / n;
    auto std_error = [n](double s, double sq) {
      if (n < 2) return 0.0;
      const double var = std::max(0.0, (sq - s * s / n) / (n - 1));
      return std::sqrt(var / n);
    };
    const GridPoint& p = grid[g];
    const Overlay& o = overlays[g];
    const bool analytically_unstable = !o.theta.has_value();
    const double plotted =
        unstable || analytically_unstable ? spec.plot_ceiling : std::min(mean, spec.plot_ceiling);
    points.push_back(json{{"policy", policy_name(p.policy)},
                          {"interpolation", to_string(p.interpolation)},
                          {"lambda", p.lambda},
                          {"mu", p.mu},
                          {"param", optional_json(param_of(p.policy))},
                          {"theta_hat_mean", mean},
                          {"theta_hat_se", std_error(sum, sum_sq)},
                          {"abs_theta_hat_mean", abs_mean},
                          {"abs_theta_hat_se", std_error(abs_sum, abs_sq)},
                          {"mean_delay", delay_n ? json(delay / delay_n) : json(nullptr)},
                          {"mean_aoi", aoi_n ? json(aoi / aoi_n) : json(nullptr)},
                          {"unstable", unstable},
                          {"theta_analytic", optional_json(o.theta)},
                          {"theta_lower_bound", optional_json(o.lower_bound)},
                          {"theta_plot", plotted}});
    out << policy_label(p) << " lambda=" << p.lambda << " mu=" << p.mu;
    if (auto param = param_of(p.policy)) out << " param=" << *param;
    out << "  theta_hat=" << mean;
    if (o.theta) out << "  theta=" << *o.theta;
    if (unstable) out << "  [unstable]";
    out << '\n';
  }
  json rows = json::array();
  for (const auto& rec : records) {
    rows.push_back(json{{"seed", *rec.seed}, {"config_hash", hex64(config_hash(rec))}});
  }
  summary["points"] = std::move(points);
  summary["rows"] = std::move(rows);

  ExperimentResult result;
  result.records = std::move(records);
  result.summary_json = summary.dump(2);
  result.stdout_text = out.str();
  return result;
}

ExperimentResult run_analytic(const ExperimentSpec& spec, const std::vector<GridPoint>& grid) {
  ExperimentResult result;
  json summary = base_summary(spec);
  json points = json::array();
  std::ostringstream out;
  for (const auto& p : grid) {
    RunRecord rec;
    rec.point = p;
    const Overlay o = analytic_overlay(p);
    rec.theta_analytic = o.theta;
    rec.theta_lower_bound = o.lower_bound;
    json entry{{"policy", policy_name(p.policy)},
               {"lambda", p.lambda},
               {"mu", p.mu},
               {"param", optional_json(param_of(p.policy))},
               {"theta", optional_json(o.theta)},
               {"theta_lower_bound", optional_json(o.lower_bound)},
               {"stable", o.theta.has_value()}};
    if (o.theta) {
      const auto model = AnalyticModel::solve(p.lambda, p.mu, p.policy);
      const auto parts = theta(model);
      entry["breakdown"] = {{"sampling", parts.sampling},
                            {"waiting", parts.waiting},
                            {"service", parts.service}};
      if (model.sigma) entry["sigma"] = *model.sigma;
      if (model.z0) entry["z0"] = *model.z0;
    }
    points.push_back(std::move(entry));
    out << policy_name(p.policy) << " lambda=" << p.lambda << " mu=" << p.mu;
    if (auto param = param_of(p.policy)) out << " param=" << *param;
    out << "  theta=" << (o.theta ? format_double(*o.theta) : std::string("unstable")) << '\n';
    result.records.push_back(std::move(rec));
  }
  summary["points"] = std::move(points);
  result.summary_json = summary.dump(2);
  result.stdout_text = out.str();
  return result;
}

ExperimentResult run_optimize(const ExperimentSpec& spec) {
  ExperimentResult result;
  json summary = base_summary(spec);
  json optima = json::array();
  std::ostringstream out;
  const std::string policy = normalize_policy(spec.policy);
  for (double lambda : spec.lambdas) {
    for (double mu : spec.mus) {
      RunRecord rec;
      rec.point.lambda = lambda;
      rec.point.mu = mu;
      if (policy == "uniform") {
        const RateOptimum opt = optimal_rate(lambda, mu);
        rec.point.policy = UniformPolicy{opt.r_star};
        rec.theta_analytic = opt.theta_star;
        rec.theta_lower_bound = lower_bound_theta(opt.r_star, lambda, mu).theta;
        optima.push_back(json{{"policy", policy},
                              {"lambda", lambda},
                              {"mu", mu},
                              {"r_star", opt.r_star},
                              {"theta_star", opt.theta_star},
                              {"grid_argmin", opt.grid_argmin},
                              {"grid_spacing", opt.grid_spacing},
                              {"local_minima", opt.local_minima},
                              {"multimodal", opt.multimodal}});
        out << "uniform lambda=" << lambda << " mu=" << mu << "  r*=" << opt.r_star
            << "  theta*=" << opt.theta_star << (opt.multimodal ? "  [multimodal grid]" : "")
            << '\n';
      } else if (policy == "threshold") {
        const ThresholdOptimum opt = optimal_threshold(lambda, mu, spec.beta_max);
        rec.point.policy = ThresholdPolicy{opt.beta_star};
        rec.theta_analytic = opt.theta_star;
        optima.push_back(json{{"policy", policy},
                              {"lambda", lambda},
                              {"mu", mu},
                              {"beta_star", opt.beta_star},
                              {"beta_min", opt.beta_min},
                              {"beta_max", spec.beta_max},
                              {"theta_star", opt.theta_star}});
        out << "threshold lambda=" << lambda << " mu=" << mu << "  beta*=" << opt.beta_star
            << "  theta*=" << opt.theta_star << '\n';
      } else {
        rec.point.policy = ZeroWaitPolicy{};
        rec.theta_analytic = theta_zero_wait(lambda, mu).total();
        optima.push_back(json{{"policy", policy},
                              {"lambda", lambda},
                              {"mu", mu},
                              {"theta_star", *rec.theta_analytic}});
        out << "zero_wait lambda=" << lambda << " mu=" << mu
            << "  theta=" << *rec.theta_analytic << " (no tunable parameter)\n";
      }
      result.records.push_back(std::move(rec));
    }
  }
  summary["optima"] = std::move(optima);
  result.summary_json = summary.dump(2);
  result.stdout_text = out.str();
  return result;
}

ExperimentResult run_lowerbound(const ExperimentSpec& spec) {
  ExperimentResult result;
  json summary = base_summary(spec);
  json bounds = json::array();
  std::ostringstream out;
  for (double lambda : spec.lambdas) {
    for (double mu : spec.mus) {
      for (double r : spec.rates) {
        RunRecord rec;
        rec.point = GridPoint{UniformPolicy{r}, lambda, mu, InterpolationMode::off};
        json entry{{"lambda", lambda}, {"mu", mu}, {"rate", r}};
        try {
          const double th = theta_uniform(r, lambda, mu).total();
          const LowerBoundResult lb = lower_bound_theta(r, lambda, mu);
          const double flat = lower_bound_theta_flattened(r, lambda, mu, InnerSum::up_to_n);
          const double flat_unbounded =
              lower_bound_theta_flattened(r, lambda, mu, InnerSum::unbounded);
          rec.theta_analytic = th;
          rec.theta_lower_bound = lb.theta;
          entry.update(json{{"theta", th},
                            {"lower_bound", lb.theta},
                            {"s1", lb.s1},
                            {"s2", lb.s2},
                            {"terms", lb.terms},
                            {"converged", lb.converged},
                            {"flattened_inner_up_to_n", flat},
                            {"flattened_inner_unbounded", flat_unbounded}});
          out << "r=" << r << " lambda=" << lambda << " mu=" << mu << "  theta=" << th
              << "  lower_bound=" << lb.theta << "  flattened(m<=n)=" << flat
              << "  flattened(m<inf)=" << flat_unbounded << '\n';
        } catch (const InstabilityError& e) {
          entry["error"] = e.what();
          out << "r=" << r << " lambda=" << lambda << " mu=" << mu << "  unstable\n";
        }
        bounds.push_back(std::move(entry));
        result.records.push_back(std::move(rec));
      }
    }
  }
  summary["bounds"] = std::move(bounds);
  result.summary_json = summary.dump(2);
  result.stdout_text = out.str();
  return result;
}

}  // namespace

// ---------------------------------------------------------------------------

Command parse_command(std::string_view text) {
  if (text == "analytic") return Command::analytic;
  if (text == "simulate") return Command::simulate;
  if (text == "sweep") return Command::sweep;
  if (text == "optimize") return Command::optimize;
  if (text == "lowerbound") return Command::lowerbound;
  if (text == "validate") return Command::validate;
  throw ParameterError("unknown command '" + std::string(text) + "'");
}

std::string_view to_string(Command command) noexcept {
  switch (command) {
    case Command::analytic: return "analytic";
    case Command::simulate: return "simulate";
    case Command::sweep: return "sweep";
    case Command::optimize: return "optimize";
    case Command::lowerbound: return "lowerbound";
    case Command::validate: return "validate";
  }
  return "simulate";
}

Preset parse_preset(std::string_view text) {
  static constexpr std::pair<std::string_view, Preset> table[] = {
      {"none", Preset::none},     {"fig7a", Preset::fig7a}, {"fig7b", Preset::fig7b},
      {"fig8", Preset::fig8},     {"fig9a", Preset::fig9a}, {"fig9b", Preset::fig9b},
      {"fig9c", Preset::fig9c},   {"fig10a", Preset::fig10a}, {"fig10b", Preset::fig10b}};
  for (const auto& [name, preset] : table) {
    if (name == text) return preset;
  }
  throw ParameterError("unknown preset '" + std::string(text) + "'");
}

std::string_view to_string(Preset preset) noexcept {
  switch (preset) {
    case Preset::none: return "none";
    case Preset::fig7a: return "fig7a";
    case Preset::fig7b: return "fig7b";
    case Preset::fig8: return "fig8";
    case Preset::fig9a: return "fig9a";
    case Preset::fig9b: return "fig9b";
    case Preset::fig9c: return "fig9c";
    case Preset::fig10a: return "fig10a";
    case Preset::fig10b: return "fig10b";
  }
  return "none";
}

void ExperimentSpec::validate() const {
  normalize_policy(policy);
  if (lambdas.empty() || mus.empty()) throw ParameterError("lambda and mu grids must be non-empty");
  if (policy == "uniform" && rates.empty()) throw ParameterError("rate grid must be non-empty");
  if (policy == "threshold" && betas.empty()) throw ParameterError("beta grid must be non-empty");
  if (interpolations.empty()) throw ParameterError("interpolation list must be non-empty");
  for (double x : lambdas) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ParameterError("lambda values must be positive");
  }
  for (double x : mus) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ParameterError("mu values must be positive");
  }
  for (double x : rates) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ParameterError("rate values must be positive");
  }
  for (int b : betas) {
    if (b < 1) throw ParameterError("beta values must be >= 1");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ParameterError("horizon must be positive");
  if (replications < 1) throw ParameterError("replications must be >= 1");
  if (workers < 1) throw ParameterError("workers must be >= 1");
  if (beta_max < 1) throw ParameterError("beta_max must be >= 1");
  if (!(plot_ceiling > 0.0)) throw ParameterError("plot ceiling must be positive");
}

void apply_preset(ExperimentSpec& spec, Preset preset) {
  spec.preset = preset;
  const auto rate_grid = decimal_grid(1, 19, 20);  // 0.05 .. 0.95
  spec.interpolations = {InterpolationMode::off};
  switch (preset) {
    case Preset::none:
      return;
    case Preset::fig7a:
      spec.policy = "uniform";
      spec.lambdas = {0.9};
      spec.mus = {1.0};
      spec.rates = rate_grid;
      return;
    case Preset::fig7b:
      spec.policy = "uniform";
      spec.lambdas = {0.3, 0.6, 0.9};
      spec.mus = {1.0};
      spec.rates = rate_grid;
      return;
    case Preset::fig8:
      spec.policy = "uniform";
      spec.lambdas = {0.9};
      spec.mus = {1.0};
      spec.rates = rate_grid;
      spec.interpolations = {InterpolationMode::off, InterpolationMode::single_point,
                             InterpolationMode::uniform_j};
      return;
    case Preset::fig9a:
      spec.policy = "threshold";
      spec.lambdas = {0.3, 0.5, 0.7, 0.9, 1.5, 2.0, 3.0, 4.0, 5.0};
      spec.mus = {1.0};
      spec.betas = int_range(1, 12);
      return;
    case Preset::fig9b:
      spec.policy = "threshold";
      spec.lambdas = {0.3, 0.5, 0.7, 0.9};
      spec.mus = {1.0};
      spec.betas = int_range(1, 8);
      return;
    case Preset::fig9c:
      spec.policy = "threshold";
      spec.lambdas = {1.5, 2.0, 3.0, 4.0, 5.0};
      spec.mus = {1.0};
      spec.betas = int_range(1, 15);
      return;
    case Preset::fig10a:
      spec.policy = "zero_wait";
      spec.lambdas = decimal_grid(1, 10, 5);  // 0.2 .. 2.0
      spec.mus = {1.0};
      return;
    case Preset::fig10b:
      spec.policy = "zero_wait";
      spec.lambdas = {1.0};
      spec.mus = decimal_grid(1, 10, 2);  // 0.5 .. 5.0
      return;
  }
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    std::string item = trim(text.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<ConfigEntry> parse_config_text(std::string_view text) {
  std::vector<ConfigEntry> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const std::string stripped = trim(line);
    if (!stripped.empty()) {
      const auto eq = stripped.find('=');
      if (eq == std::string::npos) {
        throw ParameterError("config line " + std::to_string(line_no) + ": expected key = value");
      }
      std::string key = trim(std::string_view(stripped).substr(0, eq));
      if (key.empty()) {
        throw ParameterError("config line " + std::to_string(line_no) + ": empty key");
      }
      std::replace(key.begin(), key.end(), '-', '_');
      entries.emplace_back(std::move(key), trim(std::string_view(stripped).substr(eq + 1)));
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return entries;
}

void apply_config(ExperimentSpec& spec, const std::vector<ConfigEntry>& entries) {
  std::unordered_set<std::string> seen;
  auto first_time = [&](const std::string& key) { return seen.insert(key).second; };
  // Preset first, so explicit grids in the same file override it.
  for (const auto& [key, value] : entries) {
    if (key == "preset") apply_preset(spec, parse_preset(trim(value)));
  }
  for (const auto& [key, value] : entries) {
    const auto items = split_list(value);
    if (key == "lambda") {
      if (first_time(key)) spec.lambdas.clear();
      for (const auto& v : items) spec.lambdas.push_back(parse_double(v, key));
    } else if (key == "mu") {
      if (first_time(key)) spec.mus.clear();
      for (const auto& v : items) spec.mus.push_back(parse_double(v, key));
    } else if (key == "rate" || key == "r") {
      if (first_time("rate")) spec.rates.clear();
      for (const auto& v : items) spec.rates.push_back(parse_double(v, key));
    } else if (key == "beta") {
      if (first_time(key)) spec.betas.clear();
      for (const auto& v : items) spec.betas.push_back(static_cast<int>(parse_integer(v, key)));
    } else if (key == "interp" || key == "interpolation") {
      if (first_time("interp")) spec.interpolations.clear();
      for (const auto& v : items) spec.interpolations.push_back(parse_interpolation_mode(v));
    } else if (key == "policy") {
      spec.policy = normalize_policy(value);
    } else if (key == "horizon" || key == "T") {
      spec.horizon = parse_double(value, key);
    } else if (key == "reps" || key == "replications") {
      spec.replications = static_cast<int>(parse_integer(value, key));
    } else if (key == "seed") {
      const long long s = parse_integer(value, key);
      if (s < 0) throw ParameterError("seed must be non-negative");
      spec.seed = static_cast<std::uint64_t>(s);
    } else if (key == "out") {
      spec.out_dir = trim(value);
    } else if (key == "workers") {
      spec.workers = static_cast<int>(parse_integer(value, key));
    } else if (key == "ceiling" || key == "plot_ceiling") {
      spec.plot_ceiling = parse_double(value, key);
    } else if (key == "beta_max") {
      spec.beta_max = static_cast<int>(parse_integer(value, key));
    } else if (key == "command") {
      spec.command = parse_command(trim(value));
    } else if (key != "preset") {
      throw ParameterError("unknown config key '" + key + "'");
    }
  }
}

std::vector<GridPoint> expand_grid(const ExperimentSpec& spec) {
  spec.validate();
  const std::string policy = normalize_policy(spec.policy);
  std::vector<Policy> policies;
  if (policy == "uniform") {
    for (double r : spec.rates) policies.emplace_back(UniformPolicy{r});
  } else if (policy == "threshold") {
    for (int b : spec.betas) policies.emplace_back(ThresholdPolicy{b});
  } else {
    policies.emplace_back(ZeroWaitPolicy{});
  }
  std::vector<GridPoint> grid;
  for (double lambda : spec.lambdas) {
    for (double mu : spec.mus) {
      for (const auto& pol : policies) {
        for (auto mode : spec.interpolations) grid.push_back(GridPoint{pol, lambda, mu, mode});
      }
    }
  }
  return grid;
}

std::string_view csv_header() noexcept {
  return "policy,lambda,mu,param,T,seed,theta_hat,abs_theta_hat,mean_delay,mean_aoi,samples,"
         "unstable,theta_analytic,theta_lower_bound";
}

std::string csv_row(const RunRecord& record) {
  const GridPoint& p = record.point;
  std::string row;
  row.reserve(192);
  auto field = [&row](const std::string& s) {
    row += s;
    row += ',';
  };
  field(policy_label(p));
  field(format_double(p.lambda));
  field(format_double(p.mu));
  if (const auto* t = std::get_if<ThresholdPolicy>(&p.policy)) {
    field(std::to_string(t->beta));
  } else {
    field(format_optional(param_of(p.policy)));
  }
  field(format_optional(record.horizon));
  field(format_optional(record.seed));
  if (record.report) {
    const auto& r = *record.report;
    field(format_double(r.theta_hat));
    field(format_double(r.abs_theta_hat));
    field(format_optional(r.mean_delay));
    field(format_optional(r.mean_aoi));
    field(std::to_string(r.sample_count));
    field(r.unstable ? "1" : "0");
  } else {
    row += ",,,,,,";
  }
  field(format_optional(record.theta_analytic));
  row += format_optional(record.theta_lower_bound);
  return row;
}

std::string csv_body(const std::vector<RunRecord>& records) {
  std::string body;
  for (const auto& rec : records) {
    body += csv_row(rec);
    body += '\n';
  }
  return body;
}

std::uint64_t config_hash(const RunRecord& record) {
  const GridPoint& p = record.point;
  std::string key = policy_label(p) + '|' + format_double(p.lambda) + '|' + format_double(p.mu) +
                    '|' + format_optional(param_of(p.policy)) + '|' +
                    format_optional(record.horizon) + '|' + format_optional(record.seed);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  switch (spec.command) {
    case Command::analytic:
      return run_analytic(spec, expand_grid(spec));
    case Command::simulate:
    case Command::sweep:
      return run_simulations(spec, expand_grid(spec));
    case Command::optimize:
      return run_optimize(spec);
    case Command::lowerbound:
      return run_lowerbound(spec);
    case Command::validate:
      break;
  }
  throw ParameterError("validate is run through the validation suite, not run_experiment");
}

std::pair<std::filesystem::path, std::filesystem::path> write_artifacts(
    const ExperimentSpec& spec, const ExperimentResult& result) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(spec.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + spec.out_dir.string() + ": " + ec.message());
  std::string stem(to_string(spec.command));
  if (spec.preset != Preset::none) {
    stem += '_';
    stem += to_string(spec.preset);
  }
  const fs::path csv_path = spec.out_dir / (stem + ".csv");
  const fs::path json_path = spec.out_dir / (stem + ".json");
  {
    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) throw IoError("cannot open " + csv_path.string() + " for writing");
    csv << csv_header() << '\n' << csv_body(result.records);
    if (!csv) throw IoError("failed writing " + csv_path.string());
  }
  {
    std::ofstream js(json_path, std::ios::binary | std::ios::trunc);
    if (!js) throw IoError("cannot open " + json_path.string() + " for writing");
    js << result.summary_json << '\n';
    if (!js) throw IoError("failed writing " + json_path.string());
  }
  return {csv_path, json_path};
}

}  // namespace recon
