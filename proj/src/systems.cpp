#include "fronttrack/systems.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>

#include "fronttrack/cache.hpp"
#include "fronttrack/numerics.hpp"

namespace fronttrack {

namespace {
thread_local ByteCache<EigenData> g_eigen_raw_cache;
thread_local ByteCache<EigenData> g_eigen_cache;
std::atomic<std::uint64_t> g_next_instance{1};
}  // namespace

SystemSpec::SystemSpec() : instance_id(g_next_instance.fetch_add(1)) {}

Vec SystemSpec::clamp_check(const Vec& u, const char* who) const {
  if (!in_working_box(u))
    throw FtError(ErrCode::LeftWorkingBox, std::string(who) + " left the working neighborhood");
  return u;
}

namespace {

Mat jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x) {
  const int n = static_cast<int>(x.size());
  Vec fx = f(x);
  Mat J(fx.size(), n);
  for (int j = 0; j < n; ++j) {
    double h = fd_step(x[j]);
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    J.col(j) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return J;
}

double param(const std::map<std::string, double>& p, const std::string& k, double dflt) {
  auto it = p.find(k);
  return it == p.end() ? dflt : it->second;
}

}  // namespace

Mat SystemSpec::quasilinear(const Vec& u) const {
  Vec v = v_of_u(u);
  Mat Dg = jacobian(conserved, v);
  Mat Df = jacobian(flux, v);
  Mat Dv = jacobian(v_of_u, u);
  return (Dg * Dv).fullPivLu().solve(Df * Dv);
}

EigenData eigen_raw(const SystemSpec& sys, const Vec& u) {
  std::string key = cache_key(sys.instance_id, 0, u);
  if (const EigenData* hit = g_eigen_raw_cache.find(key)) return *hit;
  Mat Au = sys.A(u);
  Mat Eu = sys.E(u);
  // A symmetric, E SPD: the pencil (A, E) has real eigenvalues and
  // E-orthogonal eigenvectors; eigenvalues come out sorted ascending.
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(Au, Eu);
  if (es.info() != Eigen::Success)
    throw FtError(ErrCode::NonHyperbolic, "generalized eigensolver failed");
  EigenData d;
  d.lambdas = es.eigenvalues();
  d.right_vectors = es.eigenvectors();
  for (int i = 0; i + 1 < sys.N; ++i)
    if (d.lambdas[i + 1] - d.lambdas[i] < 1e-8)
      throw FtError(ErrCode::NonHyperbolic, "eigenvalues coalesce at family " +
                                                std::to_string(i + 1));
  for (int i = 0; i < sys.N; ++i) d.right_vectors.col(i).normalize();
  d.left_vectors = d.right_vectors.fullPivLu().inverse();
  g_eigen_raw_cache.put(std::move(key), d);
  return d;
}

double lambda_directional(const SystemSpec& sys, const Vec& u, int family, const Vec& dir) {
  double h = fd_step(u.norm());
  Vec up = u + h * dir, um = u - h * dir;
  EigenData dp = eigen_raw(sys, up), dm = eigen_raw(sys, um);
  return (dp.lambdas[family - 1] - dm.lambdas[family - 1]) / (2.0 * h);
}

namespace {

// Deterministic sign convention at u_star: make the largest-magnitude
// component of each raw eigenvector positive.
Vec reference_direction(const SystemSpec& sys, int family) {
  EigenData d = eigen_raw(sys, sys.u_star);
  Vec r = d.right_vectors.col(family - 1);
  int imax = 0;
  for (int i = 1; i < r.size(); ++i)
    if (std::abs(r[i]) > std::abs(r[imax])) imax = i;
  if (r[imax] < 0) r = -r;
  return r;
}

}  // namespace

EigenData eigen(const SystemSpec& sys, const Vec& u) {
  std::string key = cache_key(sys.instance_id, 1, u);
  if (const EigenData* hit = g_eigen_cache.find(key)) return *hit;
  EigenData d = eigen_raw(sys, u);
  for (int i = 1; i <= sys.N; ++i) {
    Vec r = d.right_vectors.col(i - 1);
    if (sys.field_kinds[i - 1] == FieldKind::GenuinelyNonlinear) {
      double g = lambda_directional(sys, u, i, r);
      if (std::abs(g) < 1e-8)
        throw FtError(ErrCode::NormalizationFailure,
                      "grad(lambda).r vanishes for GNL family " + std::to_string(i));
      d.right_vectors.col(i - 1) = r / g;  // grad(lambda_i).r_i = 1
    } else {
      Vec ref = reference_direction(sys, i);
      if (r.dot(ref) < 0) d.right_vectors.col(i - 1) = -r;
    }
  }
  d.left_vectors = d.right_vectors.fullPivLu().inverse();
  g_eigen_cache.put(std::move(key), d);
  return d;
}

FieldReport classify_field(const SystemSpec& sys, int family, const std::vector<Vec>& samples) {
  double min_abs = 1e300, min_signed = 1e300;
  bool all_tiny = true, all_big = true;
  for (const Vec& u : samples) {
    EigenData d = eigen_raw(sys, u);
    double g = lambda_directional(sys, u, family, d.right_vectors.col(family - 1));
    min_abs = std::min(min_abs, std::abs(g));
    min_signed = std::min(min_signed, std::abs(g));
    if (std::abs(g) > 1e-10) all_tiny = false;
    if (std::abs(g) < 1e-5) all_big = false;
  }
  if (all_tiny) return {FieldKind::LinearlyDegenerate, min_abs};
  if (all_big) return {FieldKind::GenuinelyNonlinear, min_signed};
  throw FtError(ErrCode::MixedField, "family " + std::to_string(family) +
                                         " neither GNL nor LD on the sample grid");
}

HypothesisReport check_hypotheses(const SystemSpec& sys, int grid_per_axis) {
  HypothesisReport rep;
  const int N = sys.N, h = sys.h;
  rep.block_structure = true;
  rep.symmetry = true;
  rep.kawashima_shizuta = true;
  rep.strict_hyperbolicity = true;
  rep.hyp5_consistent = true;
  rep.spectral_gap = 1e300;
  rep.min_eig_sep = 1e300;

  std::vector<Vec> grid;
  // Axis-aligned grid in the working box; coarse but covers corners.
  std::vector<double> offs;
  for (int i = 0; i < grid_per_axis; ++i)
    offs.push_back(-sys.box_halfwidth + 2.0 * sys.box_halfwidth * i / (grid_per_axis - 1));
  std::vector<int> idx(N, 0);
  while (true) {
    Vec u = sys.u_star;
    for (int d = 0; d < N; ++d) u[d] += offs[idx[d]];
    grid.push_back(u);
    int d = 0;
    for (; d < N; ++d) {
      if (++idx[d] < grid_per_axis) break;
      idx[d] = 0;
    }
    if (d == N) break;
  }

  int k = 0;
  {
    EigenData d0 = eigen_raw(sys, sys.u_star);
    for (int i = 0; i < N; ++i)
      if (std::abs(d0.lambdas[i]) <= 1e-10) k = i + 1;
  }

  for (const Vec& u : grid) {
    Mat Eu = sys.E(u), Au = sys.A(u), Bu = sys.B(u);
    Mat Gu = sys.G(u, Vec::Zero(N));
    // block shapes
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < N; ++j) {
        if (std::abs(Bu(i, j)) > 1e-12 || std::abs(Bu(j, i)) > 1e-12) rep.block_structure = false;
        if (std::abs(Gu(i, j)) > 1e-12) rep.block_structure = false;
        if (j >= h && std::abs(Eu(i, j)) > 1e-12) rep.block_structure = false;
      }
    Mat B22 = Bu.bottomRightCorner(N - h, N - h);
    Eigen::SelfAdjointEigenSolver<Mat> esb(B22);
    if ((B22 - B22.transpose()).norm() > 1e-10 || esb.eigenvalues().minCoeff() <= 0)
      rep.block_structure = false;
    if ((Au - Au.transpose()).norm() > 1e-10) rep.symmetry = false;
    Eigen::SelfAdjointEigenSolver<Mat> ese(Eu);
    if ((Eu - Eu.transpose()).norm() > 1e-10 || ese.eigenvalues().minCoeff() <= 0)
      rep.symmetry = false;

    EigenData d;
    try {
      d = eigen_raw(sys, u);
    } catch (const FtError&) {
      rep.strict_hyperbolicity = false;
      continue;
    }
    for (int i = 0; i + 1 < N; ++i)
      rep.min_eig_sep = std::min(rep.min_eig_sep, d.lambdas[i + 1] - d.lambdas[i]);
    for (int i = 1; i <= N; ++i)
      if (i != k) rep.spectral_gap = std::min(rep.spectral_gap, std::abs(d.lambdas[i - 1]));
    // KS: no eigenvector of E^{-1}A in ker B
    for (int i = 0; i < N; ++i) {
      double nb = (Bu * d.right_vectors.col(i)).norm();
      if (nb <= 1e-8) rep.kawashima_shizuta = false;
    }
    // Hypothesis 5 case consistency
    Mat A11 = Au.topLeftCorner(h, h);
    if (h == 0) {
      // invertible viscosity: no case constraint
    } else if (sys.hyp5_case == Hyp5Case::A) {
      if (std::abs(A11.fullPivLu().determinant()) < 1e-10) {
        rep.detail = "det A11 vanishes on the working box (case B is unsupported)";
        rep.hyp5_consistent = false;
      }
    } else {
      if (A11.norm() > 1e-12) {
        rep.detail = "A11 not identically zero under case C";
        rep.hyp5_consistent = false;
      }
    }
  }
  return rep;
}

int boundary_char_family(const SystemSpec& sys) {
  EigenData d = eigen_raw(sys, sys.u_star);
  int k = 0;
  for (int i = 1; i <= sys.N; ++i) {
    if (std::abs(d.lambdas[i - 1]) <= 1e-10) {
      if (k != 0) throw FtError(ErrCode::NonHyperbolic, "two eigenvalues vanish at u_star");
      k = i;
    }
  }
  if (k == 0)
    throw FtError(ErrCode::NoCharacteristicFamily,
                  "all eigenvalues bounded away from 0 at u_star");
  return k;
}

namespace {

std::shared_ptr<SystemSpec> finish(std::shared_ptr<SystemSpec> s,
                                   const std::map<std::string, double>& params) {
  s->params = params;
  if (auto it = params.find("box_halfwidth"); it != params.end()) s->box_halfwidth = it->second;
  if (auto it = params.find("s_max"); it != params.end()) s->s_max = it->second;
  for (int i = 0; i < s->N; ++i) {
    auto it = params.find("ustar" + std::to_string(i));
    if (it != params.end()) s->u_star[i] = it->second;
  }
  // classify fields on a small sample grid around u_star
  std::vector<Vec> samples;
  samples.push_back(s->u_star);
  for (int d = 0; d < s->N; ++d) {
    Vec up = s->u_star, um = s->u_star;
    up[d] += 0.6 * s->box_halfwidth;
    um[d] -= 0.6 * s->box_halfwidth;
    samples.push_back(up);
    samples.push_back(um);
  }
  s->field_kinds.clear();
  for (int i = 1; i <= s->N; ++i) s->field_kinds.push_back(classify_field(*s, i, samples).kind);
  return s;
}

std::shared_ptr<SystemSpec> make_burgers(const std::map<std::string, double>& params) {
  auto s = std::make_shared<SystemSpec>();
  s->N = 1;
  s->h = 0;
  s->id = "burgers";
  s->conserved = [](const Vec& v) { return v; };
  s->flux = [](const Vec& v) {
    Vec f(1);
    f[0] = 0.5 * v[0] * v[0];
    return f;
  };
  s->v_of_u = [](const Vec& u) { return u; };
  s->u_of_v = [](const Vec& v) { return v; };
  s->E = [](const Vec&) { return Mat::Identity(1, 1); };
  s->A = [](const Vec& u) {
    Mat a(1, 1);
    a(0, 0) = u[0];
    return a;
  };
  s->B = [](const Vec&) { return Mat::Identity(1, 1); };
  s->G = [](const Vec&, const Vec&) { return Mat::Zero(1, 1); };
  s->u_star = Vec::Zero(1);
  return finish(s, params);
}

std::shared_ptr<SystemSpec> make_linear(const std::map<std::string, double>& params) {
  auto s = std::make_shared<SystemSpec>();
  s->N = 3;
  s->h = 0;
  s->id = "linear";
  Mat A0(3, 3), B0(3, 3);
  A0 << param(params, "a11", -1.0), param(params, "a12", 0.0), param(params, "a13", 0.15),
      param(params, "a12", 0.0), param(params, "a22", 0.0), param(params, "a23", 0.0),
      param(params, "a13", 0.15), param(params, "a23", 0.0), param(params, "a33", 1.0);
  B0 << param(params, "b11", 1.0), param(params, "b12", 0.2), param(params, "b13", 0.0),
      param(params, "b12", 0.2), param(params, "b22", 1.3), param(params, "b23", 0.1),
      param(params, "b13", 0.0), param(params, "b23", 0.1), param(params, "b33", 0.8);
  s->conserved = [](const Vec& v) { return v; };
  s->flux = [A0](const Vec& v) { return Vec(A0 * v); };
  s->v_of_u = [](const Vec& u) { return u; };
  s->u_of_v = [](const Vec& v) { return v; };
  s->E = [](const Vec&) { return Mat::Identity(3, 3); };
  s->A = [A0](const Vec&) { return A0; };
  s->B = [B0](const Vec&) { return B0; };
  s->G = [](const Vec&, const Vec&) { return Mat::Zero(3, 3); };
  s->u_star = Vec::Zero(3);
  return finish(s, params);
}

// Lagrangian isentropic gas dynamics: tau_t - u_x = 0, u_t + p(tau)_x = 0,
// p(tau) = K tau^{-gamma}.  Physical viscosity acts on u only (h=1, case C);
// "identity" uses B = I (h=0).
std::shared_ptr<SystemSpec> make_p_system(const std::map<std::string, double>& params) {
  auto s = std::make_shared<SystemSpec>();
  double gamma = param(params, "gamma", 2.0);
  double K = param(params, "K", 0.5);
  double nu = param(params, "nu", 1.0);
  bool identity = param(params, "identity_viscosity", 0.0) > 0.5;
  s->N = 2;
  s->h = identity ? 0 : 1;
  s->hyp5_case = Hyp5Case::C;
  s->id = "p_system";
  auto p = [gamma, K](double tau) { return K * std::pow(tau, -gamma); };
  auto dp = [gamma, K](double tau) { return -gamma * K * std::pow(tau, -gamma - 1.0); };
  s->conserved = [](const Vec& v) { return v; };
  s->flux = [p](const Vec& v) {
    Vec f(2);
    f[0] = -v[1];
    f[1] = p(v[0]);
    return f;
  };
  s->v_of_u = [](const Vec& u) { return u; };
  s->u_of_v = [](const Vec& v) { return v; };
  s->E = [dp](const Vec& u) {
    Mat e = Mat::Zero(2, 2);
    e(0, 0) = -dp(u[0]);
    e(1, 1) = 1.0;
    return e;
  };
  s->A = [dp](const Vec& u) {
    Mat a = Mat::Zero(2, 2);
    a(0, 1) = dp(u[0]);
    a(1, 0) = dp(u[0]);
    return a;
  };
  if (identity) {
    s->B = [](const Vec&) { return Mat::Identity(2, 2); };
  } else {
    s->B = [nu](const Vec&) {
      Mat b = Mat::Zero(2, 2);
      b(1, 1) = nu;
      return b;
    };
  }
  s->G = [](const Vec&, const Vec&) { return Mat::Zero(2, 2); };
  s->u_star = Vec(2);
  s->u_star << 1.0, 0.0;
  return finish(s, params);
}

// Eulerian isentropic gas dynamics: (rho, u), p = K rho^gamma. Physical
// viscosity on u (h=1, case A when u != 0).
std::shared_ptr<SystemSpec> make_isentropic_euler(const std::map<std::string, double>& params) {
  auto s = std::make_shared<SystemSpec>();
  double gamma = param(params, "gamma", 1.4);
  double K = param(params, "K", 1.0 / 1.4);
  double nu = param(params, "nu", 1.0);
  bool identity = param(params, "identity_viscosity", 0.0) > 0.5;
  s->N = 2;
  s->h = identity ? 0 : 1;
  s->hyp5_case = Hyp5Case::A;
  s->id = "isentropic_euler";
  auto p = [gamma, K](double rho) { return K * std::pow(rho, gamma); };
  auto c2 = [gamma, K](double rho) { return K * gamma * std::pow(rho, gamma - 1.0); };
  s->conserved = [](const Vec& v) {
    Vec g(2);
    g[0] = v[0];
    g[1] = v[0] * v[1];
    return g;
  };
  s->flux = [p](const Vec& v) {
    Vec f(2);
    f[0] = v[0] * v[1];
    f[1] = v[0] * v[1] * v[1] + p(v[0]);
    return f;
  };
  s->v_of_u = [](const Vec& u) { return u; };
  s->u_of_v = [](const Vec& v) { return v; };
  s->E = [c2](const Vec& u) {
    Mat e = Mat::Zero(2, 2);
    e(0, 0) = c2(u[0]) / (u[0] * u[0]);
    e(1, 1) = 1.0;
    return e;
  };
  s->A = [c2](const Vec& u) {
    Mat a(2, 2);
    double cc = c2(u[0]);
    a(0, 0) = u[1] * cc / (u[0] * u[0]);
    a(0, 1) = cc / u[0];
    a(1, 0) = cc / u[0];
    a(1, 1) = u[1];
    return a;
  };
  if (identity) {
    s->B = [](const Vec&) { return Mat::Identity(2, 2); };
  } else {
    s->B = [nu](const Vec&) {
      Mat b = Mat::Zero(2, 2);
      b(1, 1) = nu;
      return b;
    };
  }
  s->G = [](const Vec&, const Vec&) { return Mat::Zero(2, 2); };
  s->u_star = Vec(2);
  double rho0 = param(params, "rho0", 1.0);
  s->u_star << rho0, std::sqrt(c2(rho0));  // near-sonic reference by default
  return finish(s, params);
}

// Full Euler with polytropic pressure p = R rho theta, e = e_theta * theta,
// in primitive variables u = (rho, u, theta).  Physical viscosity acts on
// (u, theta): h = 1; identity viscosity gives h = 0.
std::shared_ptr<SystemSpec> make_full_euler(const std::map<std::string, double>& params) {
  auto s = std::make_shared<SystemSpec>();
  double R = param(params, "R", 1.0);
  double etheta = param(params, "e_theta", 1.0);
  double nu = param(params, "nu", 1.0);
  double kappa = param(params, "kappa", 1.0);
  bool identity = param(params, "identity_viscosity", 0.0) > 0.5;
  s->N = 3;
  s->h = identity ? 0 : 1;
  s->hyp5_case = Hyp5Case::A;
  s->id = "full_euler";
  s->conserved = [R, etheta](const Vec& v) {
    (void)R;
    double rho = v[0], vel = v[1], th = v[2];
    Vec g(3);
    g[0] = rho;
    g[1] = rho * vel;
    g[2] = rho * (etheta * th + 0.5 * vel * vel);
    return g;
  };
  s->flux = [R, etheta](const Vec& v) {
    double rho = v[0], vel = v[1], th = v[2];
    double p = R * rho * th;
    Vec f(3);
    f[0] = rho * vel;
    f[1] = rho * vel * vel + p;
    f[2] = vel * (rho * (etheta * th + 0.5 * vel * vel) + p);
    return f;
  };
  s->v_of_u = [](const Vec& u) { return u; };
  s->u_of_v = [](const Vec& v) { return v; };
  s->E = [R, etheta](const Vec& u) {
    Mat e = Mat::Zero(3, 3);
    e(0, 0) = R * u[2] / (u[0] * u[0]);
    e(1, 1) = 1.0;
    e(2, 2) = etheta / u[2];
    return e;
  };
  s->A = [R, etheta](const Vec& u) {
    double rho = u[0], vel = u[1], th = u[2];
    Mat a = Mat::Zero(3, 3);
    a(0, 0) = R * vel * th / (rho * rho);
    a(0, 1) = R * th / rho;
    a(1, 0) = R * th / rho;
    a(1, 1) = vel;
    a(1, 2) = R;
    a(2, 1) = R;
    a(2, 2) = vel * etheta / th;
    return a;
  };
  if (identity) {
    s->B = [](const Vec&) { return Mat::Identity(3, 3); };
  } else {
    s->B = [nu, kappa](const Vec&) {
      Mat b = Mat::Zero(3, 3);
      b(1, 1) = nu;
      b(2, 2) = kappa;
      return b;
    };
  }
  s->G = [](const Vec&, const Vec&) { return Mat::Zero(3, 3); };
  double c = std::sqrt(R * 1.0 + R * R * 1.0 / etheta);
  s->u_star = Vec(3);
  double vel0 = param(params, "ustar_vel", identity ? 0.0 : c);
  s->u_star << 1.0, vel0, 1.0;
  if (!identity && std::abs(vel0) < 1e-8)
    throw FtError(ErrCode::CaseBUnsupported,
                  "full_euler with physical viscosity at zero velocity is case B");
  return finish(s, params);
}

}  // namespace

std::shared_ptr<SystemSpec> make_system(const std::string& id,
                                        const std::map<std::string, double>& params) {
  if (id == "burgers") return make_burgers(params);
  if (id == "linear") return make_linear(params);
  if (id == "p_system") return make_p_system(params);
  if (id == "isentropic_euler") return make_isentropic_euler(params);
  if (id == "full_euler") return make_full_euler(params);
  throw FtError(ErrCode::BadScenario, "unknown system id '" + id + "'");
}

}  // namespace fronttrack
