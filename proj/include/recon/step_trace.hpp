#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "recon/process.hpp"

namespace recon {

/// A right-continuous, piecewise-constant integer function on [0, inf).
///
/// The value is `initial_value` on [0, t_0) and `values[k]` on [t_k, t_{k+1}).
/// Breakpoint times are strictly increasing and non-negative. Immutable once built.
class StepTrace {
 public:
  struct Breakpoint {
    double time;
    std::int64_t value;
  };

  StepTrace() = default;

  /// Validates ordering; throws ContractError on non-increasing or negative times.
  StepTrace(std::int64_t initial_value, std::vector<Breakpoint> breakpoints);

  /// N(t) of a source path: a unit step at every arrival.
  static StepTrace counting(const ProcessPath& path);

  std::int64_t initial_value() const noexcept { return initial_; }
  std::span<const Breakpoint> breakpoints() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

  std::int64_t value_at(double t) const noexcept;

  bool is_non_decreasing() const noexcept;

 private:
  std::int64_t initial_ = 0;
  std::vector<Breakpoint> points_;
};

/// Incremental builder that tolerates equal timestamps: a later breakpoint at the
/// same instant overwrites the earlier one (right-continuity keeps the last value).
class StepTraceBuilder {
 public:
  explicit StepTraceBuilder(std::int64_t initial_value = 0) : initial_(initial_value) {}

  /// Times must be non-decreasing across calls.
  void step_to(double time, std::int64_t value);
  void reserve(std::size_t n) { points_.reserve(n); }
  std::int64_t current_value() const noexcept {
    return points_.empty() ? initial_ : points_.back().value;
  }
  double last_time() const noexcept { return points_.empty() ? 0.0 : points_.back().time; }

  StepTrace build() &&;

 private:
  std::int64_t initial_;
  std::vector<StepTrace::Breakpoint> points_;
};

struct DifferenceArea {
  double signed_area = 0.0;    // integral of (a - b)
  double absolute_area = 0.0;  // integral of |a - b|
};

/// Exact integral of a - b over [begin, end] by breakpoint merging. Breakpoints past
/// `end` are ignored. Throws ParameterError when end < begin or begin < 0.
DifferenceArea integrate_difference(const StepTrace& a, const StepTrace& b, double begin,
                                    double end);

inline DifferenceArea integrate_difference(const StepTrace& a, const StepTrace& b, double T) {
  return integrate_difference(a, b, 0.0, T);
}

}  // namespace recon
