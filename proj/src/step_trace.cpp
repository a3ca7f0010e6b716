#include "recon/step_trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "recon/errors.hpp"

namespace recon {

namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

StepTrace::StepTrace(std::int64_t initial_value, std::vector<Breakpoint> breakpoints)
    : initial_(initial_value), points_(std::move(breakpoints)) {
  double prev = -1.0;
  for (const auto& p : points_) {
    if (!(p.time > prev) || !std::isfinite(p.time)) {
      throw ContractError("step trace breakpoints must be finite, non-negative and strictly "
                          "increasing (offending time " + std::to_string(p.time) + ")");
    }
    prev = p.time;
  }
}

StepTrace StepTrace::counting(const ProcessPath& path) {
  std::vector<Breakpoint> points;
  points.reserve(path.arrival_times.size());
  std::int64_t n = 0;
  for (double s : path.arrival_times) points.push_back({s, ++n});
  return StepTrace(0, std::move(points));
}

std::int64_t StepTrace::value_at(double t) const noexcept {
  auto it = std::upper_bound(points_.begin(), points_.end(), t,
                             [](double x, const Breakpoint& p) { return x < p.time; });
  return it == points_.begin() ? initial_ : std::prev(it)->value;
}

bool StepTrace::is_non_decreasing() const noexcept {
  std::int64_t prev = initial_;
  for (const auto& p : points_) {
    if (p.value < prev) return false;
    prev = p.value;
  }
  return true;
}

void StepTraceBuilder::step_to(double time, std::int64_t value) {
  if (!points_.empty()) {
    if (time < points_.back().time) {
      throw ContractError("step trace builder received a time earlier than the last breakpoint");
    }
    if (time == points_.back().time) {
      points_.back().value = value;
      return;
    }
  }
  points_.push_back({time, value});
}

StepTrace StepTraceBuilder::build() && { return StepTrace(initial_, std::move(points_)); }

DifferenceArea integrate_difference(const StepTrace& a, const StepTrace& b, double begin,
                                    double end) {
  if (!(begin >= 0.0) || !(end >= begin) || !std::isfinite(end)) {
    throw ParameterError("integration bounds must satisfy 0 <= begin <= end < inf");
  }
  const auto pa = a.breakpoints();
  const auto pb = b.breakpoints();
  auto by_time = [](const StepTrace::Breakpoint& p, double x) { return p.time <= x; };
  // Skip everything at or before `begin`; the level there is value_at(begin).
  std::size_t ia = std::lower_bound(pa.begin(), pa.end(), begin, by_time) - pa.begin();
  std::size_t ib = std::lower_bound(pb.begin(), pb.end(), begin, by_time) - pb.begin();
  std::int64_t va = a.value_at(begin);
  std::int64_t vb = b.value_at(begin);

  CompensatedSum signed_sum;
  CompensatedSum abs_sum;
  double t = begin;
  while (t < end) {
    const double na = ia < pa.size() ? pa[ia].time : INFINITY;
    const double nb = ib < pb.size() ? pb[ib].time : INFINITY;
    const double next = std::min({na, nb, end});
    const std::int64_t diff = va - vb;
    if (diff != 0) {
      const double area = static_cast<double>(diff) * (next - t);
      signed_sum.add(area);
      abs_sum.add(std::abs(area));
    }
    t = next;
    if (na == next) va = pa[ia++].value;
    if (nb == next) vb = pb[ib++].value;
  }
  return {signed_sum.value(), abs_sum.value()};
}

}  // namespace recon
