#include <cmath>

#include "doctest.h"
#include "dragmc/errors.hpp"
#include "dragmc/kernels.hpp"
#include "dragmc/testbed.hpp"

using namespace dragmc;

namespace {
SlowVector sx(double v) { return SlowVector{{v}}; }
FastVector fy(double v) { return FastVector{{v}}; }
}  // namespace

TEST_CASE("prepare_slow caches sin and the quadratic weight") {
  Test1Model m;
  const SlowContext c0 = m.prepare_slow(sx(0.0));
  CHECK(m.energy(c0, fy(0.0)) == 0.0);
  CHECK(m.energy(c0, fy(1.0)) == 50.0);

  const SlowContext c1 = m.prepare_slow(sx(1.0));
  CHECK(c1.x() == sx(1.0));
  // Residual term vanishes exactly, leaving x^2.
  CHECK(m.energy(c1, fy(std::sin(1.0))) == 1.0);
  CHECK(std::sin(1.0) == doctest::Approx(0.841471).epsilon(1e-6));
}

TEST_CASE("eval counters") {
  Test1Model m;
  CHECK(m.eval_counts() == EvalCounts{0, 0});
  const auto ctx = m.prepare_slow(sx(0.3));
  for (int i = 0; i < 3; ++i) m.energy(ctx, fy(0.1 * i));
  CHECK(m.eval_counts() == EvalCounts{1, 3});
  CHECK(m.eval_counts() == EvalCounts{1, 3});  // reading does not mutate

  const auto a = m.prepare_slow(sx(0.5));
  const auto b = m.prepare_slow(sx(0.5));
  CHECK(m.eval_counts().slow_preparations == 3);
  CHECK(a.index() != b.index());
  CHECK(a.index() < b.index());
  CHECK(m.sine_evaluations() == m.eval_counts().slow_preparations);
}

TEST_CASE("a drag step with n = 20 costs exactly one slow preparation") {
  Test1Model m;
  Rng rng(3);
  KernelStats stats;
  ChainState s = make_state(m, sx(0.2), fy(std::sin(0.2)));
  const GaussianWalkProposal outer({1.0});
  const DragConfig cfg{20, GaussianWalkProposal({0.2}), 1};
  for (int k = 0; k < 50; ++k) {
    const auto before = m.eval_counts();
    drag_step(s, outer, cfg, m, rng, stats);
    const auto after = m.eval_counts();
    CHECK(after.slow_preparations == before.slow_preparations + 1);
    // One new evaluation at y_0, then two per inner step.
    CHECK(after.fast_evaluations == before.fast_evaluations + 1 + 2 * 19);
  }
  CHECK(m.sine_evaluations() == m.eval_counts().slow_preparations);
}

TEST_CASE("model errors") {
  Test1Model m;
  Test2Model other;
  CHECK_THROWS_AS(m.prepare_slow(SlowVector{{0.0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(m.prepare_slow(sx(NAN)), InputError);
  CHECK_THROWS_AS(m.prepare_slow(sx(INFINITY)), InputError);
  const auto ctx = m.prepare_slow(sx(0.0));
  CHECK_THROWS_AS(m.energy(ctx, FastVector{{0.0, 0.0}}), InputError);
  CHECK_THROWS_AS(other.energy(ctx, FastVector{{0.0, 0.0}}), InputError);
  CHECK_THROWS_AS(m.energy(SlowContext{}, fy(0.0)), InputError);
  // Failed calls are not counted.
  CHECK(m.eval_counts() == EvalCounts{1, 0});
}

TEST_CASE("cached evaluation is bit-identical to the closed form") {
  Test1Model m1;
  Test2Model m2;
  Rng rng(11);
  for (int k = 0; k < 1000; ++k) {
    const double x = 3.0 * rng.normal();
    const double y = 2.0 * rng.normal();
    const double z = 2.0 * rng.normal();
    const auto c1 = m1.prepare_slow(sx(x));
    const auto c2 = m2.prepare_slow(sx(x));
    REQUIRE(m1.energy(c1, fy(y)) == test1_energy(x, y));
    REQUIRE(m2.energy(c2, FastVector{{y, z}}) == test2_energy(x, y, z));
    // Determinism across repeated calls.
    REQUIRE(m1.energy(c1, fy(y)) == m1.energy(c1, fy(y)));
  }
}

TEST_CASE("slow delay is applied and accounted") {
  Test1Model m;
  m.set_slow_delay(std::chrono::microseconds(200));
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < 5; ++k) m.prepare_slow(sx(0.1 * k));
  const auto elapsed = std::chrono::steady_clock::now() - t0;
  CHECK(elapsed >= std::chrono::microseconds(1000));
  CHECK(m.delay_spent() >= std::chrono::microseconds(1000));
}

TEST_CASE("contexts are shareable values") {
  Test1Model m;
  const SlowContext a = m.prepare_slow(sx(0.7));
  const SlowContext b = a;  // NOLINT: copy shares the payload
  CHECK(m.energy(a, fy(0.4)) == m.energy(b, fy(0.4)));
  CHECK(a.index() == b.index());
}
