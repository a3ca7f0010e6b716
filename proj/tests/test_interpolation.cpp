#include <doctest.h>

#include "recon/errors.hpp"
#include "recon/interpolation.hpp"
#include "recon/simulation.hpp"

using namespace recon;

namespace {

SamplePacket packet(std::int64_t index, double sample_time, std::int64_t value, double delivery) {
  SamplePacket p;
  p.index = index;
  p.sample_time = sample_time;
  p.sampled_value = value;
  p.enqueue_time = sample_time;
  p.service_start = sample_time;
  p.service = delivery - sample_time;
  p.delivery_time = delivery;
  return p;
}

SimulationRun run(double r, std::uint64_t seed, double T = 1e4) {
  SimConfig c;
  c.policy = UniformPolicy{r};
  c.horizon = T;
  c.seed = seed;
  return run_pipeline(c);
}

}  // namespace

TEST_CASE("mode names round-trip") {
  for (auto m : {InterpolationMode::off, InterpolationMode::single_point, InterpolationMode::uniform_j,
                 InterpolationMode::oracle}) {
    CHECK(parse_interpolation_mode(to_string(m)) == m);
  }
  CHECK(parse_interpolation_mode("uniform_j") == InterpolationMode::uniform_j);
  CHECK_THROWS_AS(parse_interpolation_mode("cubic"), ParameterError);
}

TEST_CASE("unit increments leave nothing to interpolate") {
  const std::vector<SamplePacket> packets{packet(1, 1.0, 1, 1.5), packet(2, 2.0, 2, 2.5),
                                          packet(3, 3.0, 2, 3.5)};
  const StepTrace plain = plain_reconstruction(packets);
  for (auto m : {InterpolationMode::single_point, InterpolationMode::uniform_j}) {
    const StepTrace t = reconstruct_with_interpolation(packets, {m, 1});
    REQUIRE(t.size() == plain.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      CHECK(t.breakpoints()[i].time == plain.breakpoints()[i].time);
      CHECK(t.breakpoints()[i].value == plain.breakpoints()[i].value);
    }
  }
}

TEST_CASE("a jump of 3 gets two guessed steps") {
  const std::vector<SamplePacket> packets{packet(1, 1.0, 1, 2.0), packet(2, 3.0, 4, 5.0)};
  const StepTrace t = reconstruct_with_interpolation(packets, {InterpolationMode::uniform_j, 9});
  REQUIRE(t.size() == 4);
  CHECK(t.breakpoints()[1].value == 2);
  CHECK(t.breakpoints()[2].value == 3);
  CHECK(t.breakpoints()[1].time > 2.0);
  CHECK(t.breakpoints()[2].time < 5.0);
  CHECK(t.value_at(5.0) == 4);

  const StepTrace s = reconstruct_with_interpolation(packets, {InterpolationMode::single_point, 9});
  REQUIRE(s.size() == 3);
  CHECK(s.breakpoints()[1].value == 2);
}

TEST_CASE("interpolated traces agree with the plain trace at deliveries") {
  const auto r = run(0.1, 3);
  const StepTrace plain = plain_reconstruction(r.packets);
  for (auto m : {InterpolationMode::single_point, InterpolationMode::uniform_j}) {
    const StepTrace t = reconstruct_with_interpolation(r.packets, {m, 3});
    CHECK(t.is_non_decreasing());
    bool ok = true;
    for (const auto& p : r.packets) ok = ok && t.value_at(p.delivery_time) == plain.value_at(p.delivery_time);
    CHECK(ok);
  }
}

TEST_CASE("guessing lowers the mean absolute distortion at low rates") {
  for (double r : {0.1, 0.3}) {
    double off = 0.0, single = 0.0, uniform = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto sim = run(r, seed);
      off += score_run(sim, InterpolationMode::off).abs_theta_hat;
      single += score_run(sim, InterpolationMode::single_point).abs_theta_hat;
      uniform += score_run(sim, InterpolationMode::uniform_j).abs_theta_hat;
    }
    CHECK(uniform <= off);
    CHECK(single <= off);
  }
}

TEST_CASE("ordering at r = 0.1 over a long horizon") {
  const auto sim = run(0.1, 1, 1e6);
  const double off = score_run(sim, InterpolationMode::off).abs_theta_hat;
  const double single = score_run(sim, InterpolationMode::single_point).abs_theta_hat;
  const double uniform = score_run(sim, InterpolationMode::uniform_j).abs_theta_hat;
  CHECK(uniform < single);
  CHECK(single < off);
}

TEST_CASE("oracle reconstruction dominates Algorithm 1 pathwise") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto sim = run(0.5, seed);
    const auto oracle = score_run(sim, InterpolationMode::oracle);
    CHECK(oracle.abs_theta_hat <= score_run(sim, InterpolationMode::off).abs_theta_hat);
    CHECK(oracle.abs_theta_hat <= score_run(sim, InterpolationMode::uniform_j).abs_theta_hat);
    CHECK(oracle.theta_hat == doctest::Approx(oracle.abs_theta_hat));  // never above N
  }
}

TEST_CASE("oracle with no source events is identically zero") {
  ProcessPath empty;
  empty.rate_lambda = 1.0;
  empty.horizon_T = 10.0;
  const std::vector<SamplePacket> packets{packet(1, 2.0, 0, 3.0), packet(2, 4.0, 0, 6.0)};
  const StepTrace t = oracle_reconstruction(empty, packets);
  CHECK(t.value_at(0.0) == 0);
  CHECK(t.value_at(100.0) == 0);
  CHECK(integrate_difference(StepTrace::counting(empty), t, 10.0).absolute_area == 0.0);
}

TEST_CASE("contract violations") {
  const std::vector<SamplePacket> unordered{packet(1, 1.0, 1, 3.0), packet(2, 2.0, 3, 2.5)};
  CHECK_THROWS_AS(reconstruct_with_interpolation(unordered, {InterpolationMode::uniform_j, 1}),
                  ContractError);
  const std::vector<SamplePacket> ok{packet(1, 1.0, 1, 3.0)};
  CHECK_THROWS_AS(reconstruct_with_interpolation(ok, {InterpolationMode::oracle, 1}), ContractError);
}
