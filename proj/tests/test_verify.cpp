#include <doctest.h>

#include <cmath>

#include "fronttrack/verify.hpp"

using namespace fronttrack;

namespace {
Vec state(std::initializer_list<double> v) {
  Vec u(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) u[i++] = x;
  return u;
}
}  // namespace

TEST_CASE("exact scalar solution") {
  SUBCASE("Riemann datum 1|0 gives a shock at t/2") {
    PiecewiseProfile u0;
    u0.breaks = {0.5};
    u0.values = {state({1.0}), state({0.0})};
    DatumSchedule ub;
    ub.times = {0.0};
    ub.values = {state({1.0})};
    ExactScalar ex(u0, ub);
    CHECK(ex.eval(0.4, 0.5 + 0.5 * 0.4 - 1e-6) == doctest::Approx(1.0));
    CHECK(ex.eval(0.4, 0.5 + 0.5 * 0.4 + 1e-6) == doctest::Approx(0.0));
  }
  SUBCASE("Riemann datum 0|1 gives the fan x/t") {
    PiecewiseProfile u0;
    u0.breaks = {0.2};
    u0.values = {state({0.0}), state({1.0})};
    DatumSchedule ub;
    ub.times = {0.0};
    ub.values = {state({0.0})};
    ExactScalar ex(u0, ub);
    for (double xi : {0.1, 0.4, 0.8})
      CHECK(ex.eval(0.5, 0.2 + xi * 0.5) == doctest::Approx(xi).epsilon(2e-5));
  }
  SUBCASE("constant datum stays constant") {
    PiecewiseProfile u0;
    u0.values = {state({0.3})};
    DatumSchedule ub;
    ub.times = {0.0};
    ub.values = {state({0.3})};
    CHECK(exact_scalar(u0, ub, 1.0, 0.7) == doctest::Approx(0.3));
  }
}

TEST_CASE("l1 distance") {
  PiecewiseProfile a, b;
  a.values = {state({0.0})};
  b.values = {state({0.0})};
  CHECK(l1_distance(a, b, 0, 1) == 0.0);
  a.breaks = {0.4};
  a.values = {state({0.0}), state({1.0})};
  b.breaks = {0.5};
  b.values = {state({0.0}), state({1.0})};
  CHECK(l1_distance(a, b, 0, 1) == doctest::Approx(0.1));
  CHECK(l1_distance(b, a, 0, 1) == doctest::Approx(0.1));
}

TEST_CASE("interaction estimate sweeps") {
  SUBCASE("linear system: first-order estimate has a constant ratio") {
    auto sys = make_system("linear");
    BoundaryLayerModel model = make_boundary_model(*sys);
    SweepSpec sw;
    sw.samples = 200;
    EstimateReport rep = measure_estimate(*sys, model, EstimateId::nc, sw);
    CHECK(rep.applicable > 50);
    CHECK(rep.failures == 0);
    CHECK(rep.sup_ratio > 0);
    CHECK(rep.sup_ratio < 50);
    // linearity: the tail behaves like the whole sweep
    CHECK(rep.tail_ratio == doctest::Approx(rep.sup_ratio).epsilon(0.2));
  }
  SUBCASE("me on Burgers: finite, refinement-stable, zero-RHS slice clean") {
    auto sys = make_system("burgers");
    BoundaryLayerModel model = make_boundary_model(*sys);
    SweepSpec sw;
    sw.samples = 400;
    EstimateReport rep = measure_estimate(*sys, model, EstimateId::me, sw);
    CHECK(rep.applicable > 50);
    CHECK(rep.sup_ratio < 100);
    CHECK(rep.tail_ratio <= rep.sup_ratio + 1e-12);
    SweepSpec swz = sw;
    swz.zero_rhs_slice = true;
    EstimateReport repz = measure_estimate(*sys, model, EstimateId::me, swz);
    CHECK(repz.sup_lhs_zero_rhs <= 1e-6);
  }
  SUBCASE("serial and parallel sweeps agree exactly") {
    auto sys = make_system("isentropic_euler");
    BoundaryLayerModel model = make_boundary_model(*sys);
    SweepSpec sw;
    sw.samples = 120;
    EstimateReport a = measure_estimate(*sys, model, EstimateId::me, sw, true);
    EstimateReport b = measure_estimate_serial(*sys, model, EstimateId::me, sw);
    CHECK(a.sup_ratio == b.sup_ratio);
    CHECK(a.applicable == b.applicable);
    CHECK(a.sup_lhs_zero_rhs == b.sup_lhs_zero_rhs);
  }
}

TEST_CASE("boundary condition verification") {
  SUBCASE("trivial trace has negligible residual") {
    auto sys = make_system("linear");
    BoundaryLayerModel model = make_boundary_model(*sys);
    RunConfig cfg;
    cfg.u0.values = {state({0.0, 0.0, 0.0})};
    cfg.ub.times = {0.0};
    cfg.ub.values = {state({0.0, 0.0, 0.0})};
    cfg.t_end = 1.0;
    cfg.x_max = 5.0;
    cfg.seed = 7;
    Trajectory traj = run(*sys, model, cfg);
    BoundaryConditionReport rep = verify_boundary_condition(
        *sys, model, traj, cfg.ub, {0.25, 0.5, 0.75}, 1e-2, 1e-6);
    CHECK(rep.admissible == 3);
    CHECK(rep.passing == 3);
    for (const auto& s : rep.samples) CHECK(s.beta_residual < 1e-9);
  }
  SUBCASE("linear layers are matched to closed-form accuracy") {
    auto sys = make_system("linear");
    BoundaryLayerModel model = make_boundary_model(*sys);
    RunConfig cfg;
    cfg.u0.values = {state({0.0, 0.0, 0.0})};
    cfg.ub.times = {0.0, 0.1};
    cfg.ub.values = {state({0.0, 0.0, 0.0}), state({0.012, -0.008, 0.01})};
    cfg.t_end = 1.0;
    cfg.x_max = 5.0;
    cfg.seed = 7;
    cfg.constants.K3 = 4;
    Trajectory traj = run(*sys, model, cfg);
    BoundaryConditionReport rep = verify_boundary_condition(
        *sys, model, traj, cfg.ub, {0.5, 0.7, 0.9}, 1e-2, 1e-6);
    CHECK(rep.pass_fraction == 1.0);
    for (const auto& s : rep.samples) CHECK(s.beta_residual < 1e-9);
  }
}

TEST_CASE("epsilon convergence study on Burgers") {
  auto sys = make_system("burgers");
  BoundaryLayerModel model = make_boundary_model(*sys);
  RunConfig cfg;
  cfg.u0.values = {state({0.02})};
  cfg.ub.times = {0.0, 0.2, 0.5};
  cfg.ub.values = {state({0.02}), state({-0.02}), state({0.03})};
  cfg.t_end = 1.0;
  cfg.x_max = 3.0;
  cfg.seed = 3;
  cfg.constants.A_weight = 4;
  cfg.constants.K1 = 6;
  std::vector<double> eps = {4e-2, 2e-2, 1e-2, 5e-3};
  auto rows = convergence_study(*sys, model, cfg, eps);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r.sup_tv < 1.0);
    CHECK(std::isfinite(r.l1_to_exact));
  }
  // exact error shrinks with eps
  CHECK(rows[3].l1_to_exact <= rows[0].l1_to_exact + 1e-12);
  // sup TV uniformly bounded (factor-type check)
  double tvmax = 0, tvmin = 1e300;
  for (const auto& r : rows) {
    tvmax = std::max(tvmax, r.sup_tv);
    tvmin = std::min(tvmin, r.sup_tv);
  }
  CHECK(tvmax <= 1.5 * std::max(tvmin, 1e-12));
}
