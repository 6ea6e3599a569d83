#include <doctest.h>

#include <cmath>

#include "fronttrack/numerics.hpp"
#include "fronttrack/systems.hpp"

using namespace fronttrack;

namespace {

Vec state(std::initializer_list<double> v) {
  Vec u(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) u[i++] = x;
  return u;
}

// ad-hoc 2x2 constant-coefficient system A = diag(-1, 1)
std::shared_ptr<SystemSpec> diag_linear() {
  auto s = std::make_shared<SystemSpec>();
  s->N = 2;
  s->h = 0;
  s->id = "diag2";
  Mat A0 = Mat::Zero(2, 2);
  A0(0, 0) = -1;
  A0(1, 1) = 1;
  s->conserved = [](const Vec& v) { return v; };
  s->flux = [A0](const Vec& v) { return Vec(A0 * v); };
  s->v_of_u = [](const Vec& u) { return u; };
  s->u_of_v = [](const Vec& v) { return v; };
  s->E = [](const Vec&) { return Mat::Identity(2, 2); };
  s->A = [A0](const Vec&) { return A0; };
  s->B = [](const Vec&) { return Mat::Identity(2, 2); };
  s->G = [](const Vec&, const Vec&) { return Mat::Zero(2, 2); };
  s->u_star = Vec::Zero(2);
  s->field_kinds = {FieldKind::LinearlyDegenerate, FieldKind::LinearlyDegenerate};
  return s;
}

std::vector<Vec> sample_grid(const SystemSpec& sys, int per_axis) {
  std::vector<Vec> g;
  for (int d = 0; d < sys.N; ++d)
    for (int i = 0; i < per_axis; ++i) {
      Vec u = sys.u_star;
      u[d] += -0.6 * sys.box_halfwidth + 1.2 * sys.box_halfwidth * i / (per_axis - 1);
      g.push_back(u);
    }
  return g;
}

}  // namespace

TEST_CASE("Eulerian full system eigenvalues at the reference state") {
  auto sys = make_system("full_euler", {{"identity_viscosity", 1.0}});
  // u_star = (1, 0, 1), R = 1, e_theta = 1: sound speed sqrt(2)
  EigenData d = eigen_raw(*sys, state({1.0, 0.0, 1.0}));
  CHECK(d.lambdas[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
  CHECK(d.lambdas[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d.lambdas[2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("Burgers eigenstructure") {
  auto sys = make_system("burgers");
  EigenData d = eigen(*sys, state({0.3 * 0.25 / 0.3}));  // inside the box
  Vec u = state({0.2});
  d = eigen(*sys, u);
  CHECK(d.lambdas[0] == doctest::Approx(0.2));
  CHECK(d.right_vectors(0, 0) == doctest::Approx(1.0).epsilon(1e-8));  // grad(lambda).r = 1
}

TEST_CASE("diagonal linear system eigenvectors are coordinate axes") {
  auto sys = diag_linear();
  EigenData d = eigen(*sys, state({0.05, -0.02}));
  CHECK(d.lambdas[0] == doctest::Approx(-1.0));
  CHECK(d.lambdas[1] == doctest::Approx(1.0));
  CHECK(std::abs(d.right_vectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(d.right_vectors(1, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(d.right_vectors(1, 0)) < 1e-12);
}

TEST_CASE("biorthonormality at random states") {
  for (const char* id : {"burgers", "p_system", "isentropic_euler", "full_euler", "linear"}) {
    auto sys = make_system(id);
    std::uint64_t s = 99;
    for (int n = 0; n < 1000 / 5; ++n) {
      Vec u = sys->u_star;
      for (int d = 0; d < sys->N; ++d) {
        s = splitmix64(s);
        u[d] += sys->box_halfwidth * 0.8 * (2.0 * ((s >> 11) * 0x1p-53) - 1.0);
      }
      EigenData ed = eigen(*sys, u);
      Mat I = ed.left_vectors * ed.right_vectors;
      CHECK((I - Mat::Identity(sys->N, sys->N)).cwiseAbs().maxCoeff() < 1e-10);
      // eigen residual
      Mat M = sys->E(u).fullPivLu().solve(sys->A(u));
      for (int i = 0; i < sys->N; ++i) {
        Vec r = ed.right_vectors.col(i);
        CHECK((M * r - ed.lambdas[i] * r).cwiseAbs().maxCoeff() < 1e-10 * (1 + r.norm()));
      }
    }
  }
}

TEST_CASE("conservative and quasilinear forms agree") {
  for (const char* id : {"burgers", "p_system", "isentropic_euler", "full_euler", "linear"}) {
    auto sys = make_system(id);
    Vec u = sys->u_star;
    for (int d = 0; d < sys->N; ++d) u[d] += 0.07 * (d % 2 ? -1 : 1);
    Mat M = sys->quasilinear(u);
    Mat EA = sys->E(u).fullPivLu().solve(sys->A(u));
    CHECK((M - EA).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("field classification") {
  auto euler = make_system("full_euler", {{"identity_viscosity", 1.0}});
  auto grid = sample_grid(*euler, 5);
  CHECK(classify_field(*euler, 2, grid).kind == FieldKind::LinearlyDegenerate);
  CHECK(classify_field(*euler, 1, grid).kind == FieldKind::GenuinelyNonlinear);
  CHECK(classify_field(*euler, 3, grid).kind == FieldKind::GenuinelyNonlinear);

  auto burgers = make_system("burgers");
  FieldReport rep = classify_field(*burgers, 1, sample_grid(*burgers, 5));
  CHECK(rep.kind == FieldKind::GenuinelyNonlinear);
  CHECK(rep.min_gnl == doctest::Approx(1.0).epsilon(1e-6));

  // stability under 10x refinement
  auto fine = sample_grid(*euler, 50);
  CHECK(classify_field(*euler, 2, fine).kind == FieldKind::LinearlyDegenerate);
  CHECK(classify_field(*euler, 1, fine).kind == FieldKind::GenuinelyNonlinear);
}

TEST_CASE("hypothesis validation") {
  SUBCASE("identity viscosity system") {
    auto sys = make_system("full_euler", {{"identity_viscosity", 1.0}});
    HypothesisReport rep = check_hypotheses(*sys, 3);
    CHECK(rep.all());
  }
  SUBCASE("Eulerian system near positive velocity is case A") {
    auto sys = make_system("full_euler", {{"ustar_vel", 1.4}, {"box_halfwidth", 0.2}});
    HypothesisReport rep = check_hypotheses(*sys, 3);
    CHECK(rep.all());
  }
  SUBCASE("Lagrangian system is case C") {
    auto sys = make_system("p_system");
    HypothesisReport rep = check_hypotheses(*sys, 3);
    CHECK(rep.all());
  }
  SUBCASE("case B is rejected") {
    CHECK_THROWS_AS(make_system("full_euler", {{"ustar_vel", 0.0}}), FtError);
  }
}

TEST_CASE("boundary characteristic family") {
  auto e_id = make_system("full_euler", {{"identity_viscosity", 1.0}});
  CHECK(boundary_char_family(*e_id) == 2);
  auto e_ph = make_system("full_euler");  // u_star velocity = sound speed
  CHECK(boundary_char_family(*e_ph) == 1);
  auto burgers = make_system("burgers");
  CHECK(boundary_char_family(*burgers) == 1);
  auto ps = make_system("p_system");
  CHECK_THROWS_AS(boundary_char_family(*ps), FtError);
}
