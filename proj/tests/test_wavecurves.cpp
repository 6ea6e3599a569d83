#include <doctest.h>

#include <cmath>

#include "fronttrack/numerics.hpp"
#include "fronttrack/wavecurves.hpp"

using namespace fronttrack;

namespace {

Vec state(std::initializer_list<double> v) {
  Vec u(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) u[i++] = x;
  return u;
}

struct Sweep {
  std::uint64_t s = 12345;
  double next() {
    s = splitmix64(s);
    return 2.0 * ((s >> 11) * 0x1p-53) - 1.0;
  }
};

}  // namespace

TEST_CASE("rarefaction curve basics") {
  auto burgers = make_system("burgers");
  Vec u = state({0.2});
  CHECK((rarefaction_curve(*burgers, 1, u, 0.0) - u).norm() == 0.0);
  CHECK(rarefaction_curve(*burgers, 1, u, -0.1)[0] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("p-system Riemann invariant constant along the 1-rarefaction") {
  auto ps = make_system("p_system");  // gamma = 2, K = 0.5
  auto invariant = [](const Vec& u) { return u[1] + 2.0 / std::sqrt(u[0]); };
  Vec u0 = state({1.05, 0.01});
  double j0 = invariant(u0);
  for (double s : {-0.2, -0.1, 0.05, 0.15}) {
    Vec u = rarefaction_curve(*ps, 1, u0, s);
    CHECK(std::abs(invariant(u) - j0) < 1e-9);
  }
}

TEST_CASE("hugoniot on Burgers") {
  auto burgers = make_system("burgers", {{"box_halfwidth", 1.0}});
  Vec u = state({0.4});
  SUBCASE("zero strength limit") {
    CurveEval e = hugoniot(*burgers, 1, u, 0.0);
    CHECK(e.state[0] == doctest::Approx(0.4));
    CHECK(e.speed == doctest::Approx(0.4));
  }
  SUBCASE("scalar Rankine-Hugoniot algebra") {
    CurveEval e = hugoniot(*burgers, 1, u, 0.2);
    CHECK(e.state[0] == doctest::Approx(0.6).epsilon(1e-10));
    CHECK(e.speed == doctest::Approx(0.5).epsilon(1e-10));
  }
}

TEST_CASE("p-system shock speed matches the closed form") {
  auto ps = make_system("p_system");
  double K = 0.5, gamma = 2.0;
  auto p = [&](double tau) { return K * std::pow(tau, -gamma); };
  Vec u = state({1.0, 0.0});
  for (double s : {0.05, 0.15, 0.3}) {
    for (int fam : {1, 2}) {
      CurveEval e = hugoniot(*ps, fam, u, s);
      double dtau = e.state[0] - u[0];
      double dp = p(e.state[0]) - p(u[0]);
      double closed = std::sqrt(-dp / dtau);
      CHECK(std::abs(std::abs(e.speed) - closed) < 1e-8);
      // RH residual directly
      Vec fl = ps->flux(e.state), fr = ps->flux(u);
      Vec gl = e.state, gr = u;
      CHECK((fl - fr - e.speed * (gl - gr)).norm() < 1e-10);
    }
  }
}

TEST_CASE("RH residual small across a random sweep") {
  auto sysv = {make_system("isentropic_euler"), make_system("full_euler")};
  Sweep rng;
  for (auto& sys : sysv) {
    for (int n = 0; n < 20; ++n) {
      Vec u = sys->u_star;
      for (int d = 0; d < sys->N; ++d) u[d] += 0.06 * rng.next();
      int fam = 1 + (n % sys->N);
      if (sys->field_kinds[fam - 1] == FieldKind::LinearlyDegenerate) continue;
      double s = 0.12 * rng.next();
      if (std::abs(s) < 1e-3) continue;
      CurveEval e = hugoniot(*sys, fam, u, s);
      Vec dfl = sys->flux(sys->v_of_u(e.state)) - sys->flux(sys->v_of_u(u));
      Vec dgl = sys->conserved(sys->v_of_u(e.state)) - sys->conserved(sys->v_of_u(u));
      CHECK((dfl - e.speed * dgl).norm() < 1e-10);
    }
  }
}

TEST_CASE("wave fan curve") {
  auto euler = make_system("full_euler", {{"identity_viscosity", 1.0}});
  Vec u = euler->u_star;
  SUBCASE("s = 0 returns the anchor") {
    for (int fam : {1, 2, 3}) CHECK((wave_fan_curve(*euler, fam, u, 0.0).state - u).norm() == 0.0);
  }
  SUBCASE("C1 matching of the two branches at s = 0") {
    double h = 1e-5;
    for (int fam : {1, 3}) {
      Vec dplus = (wave_fan_curve(*euler, fam, u, h).state - u) / h;
      Vec dminus = (u - wave_fan_curve(*euler, fam, u, -h).state) / h;
      CHECK((dplus - dminus).cwiseAbs().maxCoeff() < 1e-4);  // second-order contact
      Vec r = eigen(*euler, u).right_vectors.col(fam - 1);
      CHECK((dplus - r).cwiseAbs().maxCoeff() < 1e-4);
    }
  }
  SUBCASE("lambda constant along the linearly degenerate curve") {
    Vec u2 = u;
    u2[1] = 0.05;
    for (double s : {-0.2, 0.1, 0.2}) {
      Vec w = wave_fan_curve(*euler, 2, u2, s).state;
      CHECK(std::abs(lambda_of(*euler, 2, w) - lambda_of(*euler, 2, u2)) < 1e-9);
    }
  }
}

TEST_CASE("Lax admissibility and monotone shock speed") {
  auto sys = make_system("isentropic_euler");
  Sweep rng;
  int k = 1;
  for (int n = 0; n < 15; ++n) {
    Vec u = sys->u_star;
    for (int d = 0; d < sys->N; ++d) u[d] += 0.05 * rng.next();
    double s = 1e-3 + 0.1 * std::abs(rng.next());
    CurveEval e = hugoniot(*sys, k, u, s);
    double lam_right = lambda_of(*sys, k, u);
    double lam_left = lambda_of(*sys, k, e.state);
    CHECK(e.speed > lam_right + 1e-8);
    CHECK(e.speed < lam_left - 1e-8);
    // slope of sigma in s is about 1/2 under the normalization
    double s2 = s + 1e-3;
    CurveEval e2 = hugoniot(*sys, k, u, s2);
    double slope = (e2.speed - e.speed) / 1e-3;
    CHECK(slope > 0.3);
    CHECK(slope < 0.7);
  }
}

TEST_CASE("varsigma") {
  auto burgers = make_system("burgers", {{"box_halfwidth", 1.0}});
  Vec u = state({0.2});
  CHECK(varsigma(*burgers, 1, u, 0.0) == doctest::Approx(0.2));
  CHECK(varsigma(*burgers, 1, u, 0.1) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(varsigma(*burgers, 1, u, -0.1) == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("zero-speed parameters on Burgers") {
  auto burgers = make_system("burgers");
  CHECK(underline_s(*burgers, 1, state({0.0})) == doctest::Approx(0.0));
  CHECK(underline_s(*burgers, 1, state({-0.1})) == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(bar_s(*burgers, 1, state({0.15})) == doctest::Approx(-0.15).epsilon(1e-9));
}

TEST_CASE("sign properties and Lipschitz continuity of underline_s") {
  auto sys = make_system("isentropic_euler");
  Sweep rng;
  int k = 1;
  Vec prev_u;
  double prev_s = 0;
  for (int n = 0; n < 100; ++n) {
    Vec u = sys->u_star;
    for (int d = 0; d < sys->N; ++d) u[d] += 0.04 * rng.next();
    double lam = lambda_of(*sys, k, u);
    double su = underline_s(*sys, k, u);
    double sb = bar_s(*sys, k, u);
    CHECK(((su > 0) == (lam < 0)));
    CHECK(((sb <= 1e-12) == (lam >= -1e-12)));
    if (n > 0) {
      double lip = std::abs(su - prev_s) / ((u - prev_u).norm() + 1e-300);
      CHECK(lip < 50.0);
    }
    prev_u = u;
    prev_s = su;
  }
}

TEST_CASE("right-state curve inverts the left-state curve") {
  auto sys = make_system("full_euler", {{"identity_viscosity", 1.0}});
  Sweep rng;
  for (int n = 0; n < 10; ++n) {
    Vec u = sys->u_star;
    for (int d = 0; d < sys->N; ++d) u[d] += 0.05 * rng.next();
    int fam = 1 + (n % 3);
    double s = 0.1 * rng.next();
    if (std::abs(s) < 1e-3) continue;
    Vec left = wave_fan_curve(*sys, fam, u, s).state;
    Vec back = right_state_from_left(*sys, fam, left, s);
    CHECK((back - u).norm() < 1e-9);
  }
}
