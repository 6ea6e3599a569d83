#include <doctest.h>

#include <cmath>

#include "fronttrack/numerics.hpp"
#include "fronttrack/riemann.hpp"

using namespace fronttrack;

namespace {
Vec state(std::initializer_list<double> v) {
  Vec u(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) u[i++] = x;
  return u;
}
}  // namespace

TEST_CASE("trivial Riemann problem") {
  auto sys = make_system("full_euler", {{"identity_viscosity", 1.0}});
  Vec u = sys->u_star;
  WaveFan fan = solve_riemann(*sys, u, u);
  CHECK(fan.strengths.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("classical scalar shock") {
  auto sys = make_system("burgers", {{"box_halfwidth", 1.5}, {"s_max", 1.5}});
  WaveFan fan = solve_riemann(*sys, state({1.0}), state({0.0}));
  CHECK(fan.strengths[0] == doctest::Approx(1.0).epsilon(1e-10));
  CurveEval e = hugoniot(*sys, 1, state({0.0}), fan.strengths[0]);
  CHECK(e.speed == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("p-system strength round trip") {
  auto sys = make_system("p_system");
  Vec up = sys->u_star;
  Vec mid = wave_fan_curve(*sys, 2, up, 0.1).state;
  Vec um = wave_fan_curve(*sys, 1, mid, 0.05).state;
  WaveFan fan = solve_riemann(*sys, um, up);
  CHECK(fan.strengths[0] == doctest::Approx(0.05).epsilon(1e-8));
  CHECK(fan.strengths[1] == doctest::Approx(0.1).epsilon(1e-8));
}

TEST_CASE("accurate front emission") {
  auto sys = make_system("burgers");
  int k = 1;
  SUBCASE("single shock gives one front at sigma") {
    Vec up = state({-0.05});
    WaveFan fan = fan_from_strengths(*sys, up, state({0.1}));
    FrontEmission em = accurate_fronts(*sys, k, fan, 1e-2);
    REQUIRE(em.fronts.size() == 1);
    CHECK(em.fronts[0].kind == FrontKind::Shock);
    CHECK(em.fronts[0].speed == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("rarefaction splits by the ceiling rule") {
    double r_eps = 0.02;
    Vec up = state({0.0});
    WaveFan fan = fan_from_strengths(*sys, up, state({-2.5 * r_eps}));
    FrontEmission em = accurate_fronts(*sys, k, fan, r_eps);
    REQUIRE(em.fronts.size() == 3);
    for (const ProtoFront& f : em.fronts) {
      CHECK(f.kind == FrontKind::Rarefaction);
      CHECK(f.s == doctest::Approx(-2.5 * r_eps / 3));
      CHECK(f.speed == doctest::Approx(f.right_state[0]));  // lambda of the right state
    }
    // speeds increase left to right
    CHECK(em.fronts[0].speed < em.fronts[1].speed);
    CHECK(em.fronts[1].speed < em.fronts[2].speed);
  }
  SUBCASE("exempt family keeps its rarefaction whole") {
    double r_eps = 0.02;
    WaveFan fan = fan_from_strengths(*sys, state({0.0}), state({-2.5 * r_eps}));
    FrontEmission em = accurate_fronts(*sys, k, fan, r_eps, {1});
    CHECK(em.fronts.size() == 1);
  }
  SUBCASE("near-zero shock speed carries the incidono sign constraint") {
    Vec up = state({-0.05001});
    WaveFan fan = fan_from_strengths(*sys, up, state({0.1}));
    FrontEmission em = accurate_fronts(*sys, k, fan, 1e-2);
    REQUIRE(em.fronts.size() == 1);
    // varsigma = sigma < 0 here, so the speed may stay negative
    CHECK_FALSE(em.fronts[0].keep_sign_nonneg);
    Vec up2 = state({-0.04999});
    WaveFan fan2 = fan_from_strengths(*sys, up2, state({0.1}));
    FrontEmission em2 = accurate_fronts(*sys, k, fan2, 1e-2);
    CHECK(em2.fronts[0].keep_sign_nonneg);  // sigma >= 0 forces a nonnegative speed
  }
}

namespace {
Front mk_front(int family, FrontKind kind, double s, Vec left, Vec right, double speed) {
  Front f;
  f.family = family;
  f.kind = kind;
  f.s = s;
  f.left_state = std::move(left);
  f.right_state = std::move(right);
  f.speed = speed;
  return f;
}
}  // namespace

TEST_CASE("simplified solver") {
  auto sys = make_system("full_euler", {{"identity_viscosity", 1.0}});
  double lhat = 3.0;
  Vec ur = sys->u_star;
  SUBCASE("distinct families keep their strengths exactly") {
    double sb = 0.04, sa = -0.03;
    Vec um = wave_fan_curve(*sys, 1, ur, sb).state;
    Vec ul = wave_fan_curve(*sys, 3, um, sa).state;
    Front b = mk_front(1, FrontKind::Shock, sb, um, ur, 0.0);
    Front a = mk_front(3, FrontKind::Rarefaction, sa, ul, um, 0.0);
    FrontEmission em = simplified_fronts(*sys, 2, a, b, lhat);
    REQUIRE(em.fronts.size() == 3);
    CHECK(em.fronts[0].family == 1);
    CHECK(em.fronts[0].s == doctest::Approx(sb));
    CHECK(em.fronts[1].family == 3);
    CHECK(em.fronts[1].s == doctest::Approx(sa));
    CHECK(em.fronts[2].kind == FrontKind::NonPhysical);
    CHECK(em.fronts[2].speed == lhat);
    // outer states are preserved
    CHECK((em.fronts[0].left_state - ul).norm() < 1e-12);
    CHECK((em.fronts[2].right_state - ur).norm() < 1e-12);
  }
  SUBCASE("same family lumps the strengths") {
    double s1 = 0.03, s2 = 0.02;
    Vec um = wave_fan_curve(*sys, 1, ur, s2).state;
    Vec ul = wave_fan_curve(*sys, 1, um, s1).state;
    Front b = mk_front(1, FrontKind::Shock, s2, um, ur, 0.0);
    Front a = mk_front(1, FrontKind::Shock, s1, ul, um, 0.1);
    FrontEmission em = simplified_fronts(*sys, 2, a, b, lhat);
    REQUIRE(em.fronts.size() == 2);
    CHECK(em.fronts[0].family == 1);
    CHECK(em.fronts[0].s == doctest::Approx(s1 + s2));
    CHECK(em.fronts[1].kind == FrontKind::NonPhysical);
  }
}
