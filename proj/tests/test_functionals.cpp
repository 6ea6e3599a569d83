#include <doctest.h>

#include <cmath>

#include "fronttrack/functionals.hpp"

using namespace fronttrack;

namespace {
Vec state(std::initializer_list<double> v) {
  Vec u(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) u[i++] = x;
  return u;
}

Front mk(int family, FrontKind kind, double s, double varsigma = 0.0) {
  Front f;
  f.family = family;
  f.kind = kind;
  f.s = s;
  f.varsigma_cache = varsigma;
  return f;
}
}  // namespace

TEST_CASE("weighted strength") {
  FunctionalConstants c;
  c.A_weight = 4.0;
  int k = 2;
  CHECK(theta_weight(mk(1, FrontKind::Shock, 0.1), k, c.A_weight) == doctest::Approx(0.4));
  CHECK(theta_weight(mk(2, FrontKind::Rarefaction, -0.1), k, c.A_weight) ==
        doctest::Approx(-0.1));
  Front np = mk(4, FrontKind::NonPhysical, 0.02);
  CHECK(theta_weight(np, k, c.A_weight) == doctest::Approx(0.02));
}

TEST_CASE("approaching rule") {
  std::vector<FieldKind> kinds = {FieldKind::GenuinelyNonlinear, FieldKind::GenuinelyNonlinear,
                                  FieldKind::GenuinelyNonlinear};
  int k = 2;
  Front a = mk(2, FrontKind::Rarefaction, -0.1);
  Front b = mk(2, FrontKind::Rarefaction, -0.1);
  CHECK(approaching(a, b, k, kinds));  // two k-rarefactions always approach
  Front c1 = mk(1, FrontKind::Rarefaction, -0.1);
  Front c2 = mk(1, FrontKind::Rarefaction, -0.1);
  CHECK_FALSE(approaching(c1, c2, k, kinds));
  Front l3 = mk(3, FrontKind::Shock, 0.1);
  Front r1 = mk(1, FrontKind::Shock, 0.1);
  CHECK(approaching(l3, r1, k, kinds));
  CHECK_FALSE(approaching(r1, l3, k, kinds));
  // same family, one shock
  Front s1 = mk(1, FrontKind::Shock, 0.1);
  CHECK(approaching(s1, c2, k, kinds));
}

TEST_CASE("functional assembly") {
  auto sys = make_system("full_euler", {{"identity_viscosity", 1.0}});
  BoundaryLayerModel model = make_boundary_model(*sys);  // k = 2
  FunctionalConstants c;
  c.A_weight = 4.0;
  c.K1 = 1.0;
  c.K2 = 1.0;
  c.K3 = 1.0;
  c.K4 = 1.0;

  DatumSchedule datum;
  datum.times = {0.0};
  datum.values = {sys->u_star};

  BoundaryTraceState trace;
  trace.u_bar = sys->u_star;
  trace.xi = Vec::Zero(1);
  trace.xi_k = 0.0;
  trace.u_b = sys->u_star;

  SUBCASE("constant state gives all zeros") {
    std::vector<Front> fronts;
    FunctionalInput in{0.0, &fronts, &trace, &datum, 0.0, false};
    FunctionalSnapshot s = compute_functionals(*sys, model, in, c);
    CHECK(s.V == 0.0);
    CHECK(s.Q == 0.0);
    CHECK(s.Upsilon == 0.0);
    CHECK(s.Lambda == 0.0);
  }
  SUBCASE("single k-front with negative composite speed") {
    std::vector<Front> fronts{mk(2, FrontKind::Shock, 0.05, -0.01)};
    FunctionalInput in{0.0, &fronts, &trace, &datum, 0.0, false};
    FunctionalSnapshot s = compute_functionals(*sys, model, in, c);
    CHECK(s.V == doctest::Approx(0.05));
    CHECK(s.Q == 0.0);
    CHECK(s.R == 0.0);
    CHECK(s.S == doctest::Approx(0.05 * 0.01));
  }
  SUBCASE("Q of an approaching pair uses the weights") {
    std::vector<Front> fronts{mk(1, FrontKind::Shock, 0.1), mk(2, FrontKind::Shock, 0.2, 1.0)};
    // family 1 left of family 2: approaching requires i_left > i_right; flip order
    std::vector<Front> ordered{fronts[1], fronts[0]};
    // family 2 left of family 1 approaches
    FunctionalInput in{0.0, &ordered, &trace, &datum, 0.0, false};
    FunctionalSnapshot s = compute_functionals(*sys, model, in, c);
    CHECK(s.Q == doctest::Approx(0.4 * 0.2));
  }
}

TEST_CASE("event decrease bounds") {
  FunctionalSnapshot before, after;
  before.Upsilon = 1.0;
  SUBCASE("boundary hit below k") {
    after.Upsilon = before.Upsilon - 0.0477;  // just enough for slack 1.05
    EventRecord ev;
    ev.kind = EventKind::BoundaryHitBelowK;
    ev.s_hit = 0.05;
    Verdict v = check_event_decrease(before, after, ev, 1.05);
    CHECK(v.bound == doctest::Approx(-0.05 / 1.05));
    CHECK(v.pass);
    after.Upsilon = before.Upsilon - 0.04;
    CHECK_FALSE(check_event_decrease(before, after, ev, 1.05).pass);
  }
  SUBCASE("interior accurate") {
    EventRecord ev;
    ev.kind = EventKind::InteriorAccurate;
    ev.s_a = 0.1;
    ev.s_b = 0.2;
    after.Upsilon = before.Upsilon - 0.02;
    Verdict v = check_event_decrease(before, after, ev, 1.05);
    CHECK(v.bound == doctest::Approx(-0.02 / 1.05));
    CHECK(v.pass);
  }
  SUBCASE("datum jump") {
    EventRecord ev;
    ev.kind = EventKind::DatumJump;
    ev.datum_jump = 0.03;
    before.Z = 0.1;
    after.Z = 0.07;
    after.Upsilon = before.Upsilon - 0.03;
    Verdict v = check_event_decrease(before, after, ev, 1.05);
    CHECK(v.pass);
    CHECK(before.Z - after.Z == doctest::Approx(0.03).epsilon(1e-12));
  }
}

TEST_CASE("calibration composes the constant chain") {
  SUBCASE("linear system: curvature-free estimates") {
    auto sys = make_system("linear");
    BoundaryLayerModel model = make_boundary_model(*sys);
    CalibrationOptions o;
    o.samples = 150;
    FunctionalConstants c = calibrate(*sys, model, o);
    CHECK(c.chain_ok);
    CHECK(c.measured_C.at("C10") < 1e-6);  // LD estimate is exact for linear flux
    CHECK(c.measured_C.at("C5") < 1e-6);
    CHECK(c.delta > 1e-3);
    CHECK(c.A_weight > 1.0);
    CHECK(c.K1 >= c.K2);
  }
  SUBCASE("Burgers: finite fitted constants") {
    auto sys = make_system("burgers");
    BoundaryLayerModel model = make_boundary_model(*sys);
    CalibrationOptions o;
    o.samples = 150;
    FunctionalConstants c = calibrate(*sys, model, o);
    CHECK(c.chain_ok);
    CHECK(std::isfinite(c.measured_C.at("C2")));
    CHECK(c.measured_C.at("C2") < 100.0);
    CHECK(c.delta > 0);
    CHECK(c.delta_star <= c.delta);
  }
}
