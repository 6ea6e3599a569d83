#include "fronttrack/boundary.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "fronttrack/numerics.hpp"

namespace fronttrack {

namespace {

constexpr double kTieTol = 1e-12;

struct RealModes {
  Vec rates;  // ascending
  Mat vectors;
};

// Real eigen-decomposition of a matrix similar to a symmetric one.
RealModes real_modes(const Mat& M) {
  Eigen::EigenSolver<Mat> es(M);
  if (es.info() != Eigen::Success)
    throw FtError(ErrCode::ShootingFailure, "eigen decomposition of layer matrix failed");
  const int n = static_cast<int>(M.rows());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  Vec re = es.eigenvalues().real();
  Vec im = es.eigenvalues().imag();
  for (int i = 0; i < n; ++i)
    if (std::abs(im[i]) > 1e-8 * (1.0 + std::abs(re[i])))
      throw FtError(ErrCode::ShootingFailure, "complex layer mode encountered");
  std::sort(order.begin(), order.end(), [&](int a, int b) { return re[a] < re[b]; });
  RealModes m;
  m.rates = Vec(n);
  m.vectors = Mat(n, n);
  for (int i = 0; i < n; ++i) {
    m.rates[i] = re[order[i]];
    Vec v = es.eigenvectors().col(order[i]).real();
    m.vectors.col(i) = v.normalized();
  }
  return m;
}

// Reduced layer matrix whose eigenstructure drives the z-dynamics:
// B^{-1} A for h = 0, B22^{-1} [ -A21 A11^{-1} A21^t + A22 ] in case A.
Mat layer_matrix(const SystemSpec& sys, const Vec& u) {
  const int N = sys.N, h = sys.h;
  Mat A = sys.A(u), B = sys.B(u);
  if (h == 0) return B.fullPivLu().solve(A);
  Mat A11 = A.topLeftCorner(h, h);
  Mat A21 = A.bottomLeftCorner(N - h, h);
  Mat A22 = A.bottomRightCorner(N - h, N - h);
  Mat B22 = B.bottomRightCorner(N - h, N - h);
  Mat Nhat = -A21 * A11.fullPivLu().solve(Mat(A21.transpose())) + A22;
  return B22.fullPivLu().solve(Nhat);
}

// Lift a z-mode p to a state-space direction: identity for h = 0,
// (-A11^{-1} A21^t p; p) in case A.
Vec lift_mode(const SystemSpec& sys, const Vec& u, const Vec& p) {
  const int N = sys.N, h = sys.h;
  if (h == 0) return p;
  Mat A = sys.A(u);
  Mat A11 = A.topLeftCorner(h, h);
  Mat A21 = A.bottomLeftCorner(N - h, h);
  Vec d(N);
  d.head(h) = -A11.fullPivLu().solve(Mat(A21.transpose())) * p;
  d.tail(N - h) = p;
  return d;
}

}  // namespace

Mat BoundaryLayerModel::stable_basis(const Vec& w) const {
  const SystemSpec& s = *sys;
  if (n_stable == 0) return Mat(s.N, 0);
  RealModes m = real_modes(layer_matrix(s, w));
  Mat basis(s.N, n_stable);
  for (int i = 0; i < n_stable; ++i) {
    Vec v = lift_mode(s, w, m.vectors.col(i)).normalized();
    // orientation continuity, pinned at u_star
    if (stable_ref.cols() == n_stable && v.dot(stable_ref.col(i)) < 0) v = -v;
    basis.col(i) = v;
  }
  return basis;
}

Vec BoundaryLayerModel::stable_rates(const Vec& w) const {
  if (n_stable == 0) return Vec(0);
  RealModes m = real_modes(layer_matrix(*sys, w));
  return m.rates.head(n_stable);
}

Vec BoundaryLayerModel::r_center(const Vec& u) const {
  const SystemSpec& s = *sys;
  if (!characteristic)
    throw FtError(ErrCode::NoCharacteristicFamily, "no center direction without a characteristic family");
  RealModes m = real_modes(layer_matrix(s, u));
  int best = 0;
  for (int i = 1; i < m.rates.size(); ++i)
    if (std::abs(m.rates[i]) < std::abs(m.rates[best])) best = i;
  Vec rc = lift_mode(s, u, m.vectors.col(best));
  EigenData ed = eigen(s, u);
  double proj = ed.left_vectors.row(k - 1).dot(rc);
  if (std::abs(proj) < 1e-10)
    throw FtError(ErrCode::ShootingFailure, "center direction degenerate against r_k");
  return rc / proj;  // l_k . r_c = 1, so r_c -> r_k when lambda_k -> 0
}

double BoundaryLayerModel::a_coeff(const Vec& u) const {
  const SystemSpec& s = *sys;
  EigenData ed = eigen(s, u);
  Vec rk = ed.right_vectors.col(k - 1);
  Vec rc = r_center(u);
  double num = rk.dot(s.B(u) * rc);
  double den = rk.dot(s.E(u) * rc);
  double a = num / den;
  if (!(a > 0.0))
    throw FtError(ErrCode::ShootingFailure, "center rate coefficient a(u) not positive");
  return a;
}

double BoundaryLayerModel::theta_center(const Vec& u) const {
  return lambda_of(*sys, k, u) / a_coeff(u);
}

BoundaryLayerModel make_boundary_model(const SystemSpec& sys) {
  BoundaryLayerModel m;
  m.sys = &sys;
  EigenData ed = eigen_raw(sys, sys.u_star);
  m.n_negative = 0;
  for (int i = 0; i < sys.N; ++i)
    if (ed.lambdas[i] < -1e-10) ++m.n_negative;
  try {
    m.k = boundary_char_family(sys);
    m.characteristic = true;
    m.ld = sys.field_kinds[m.k - 1] == FieldKind::LinearlyDegenerate;
  } catch (const FtError& e) {
    if (e.code() != ErrCode::NoCharacteristicFamily) throw;
    m.characteristic = false;
    m.k = m.n_negative + 1;  // first strictly positive family; used for weighting
    m.ld = false;
  }
  const int h = sys.h;
  if (h == 0) {
    m.ell = 0;
  } else if (sys.hyp5_case == Hyp5Case::A) {
    Mat A11 = sys.A(sys.u_star).topLeftCorner(h, h);
    Eigen::SelfAdjointEigenSolver<Mat> es(A11);
    m.ell = 0;
    for (int i = 0; i < h; ++i) {
      if (std::abs(es.eigenvalues()[i]) < 1e-10)
        throw FtError(ErrCode::CaseBUnsupported, "A11 singular at u_star (case B)");
      if (es.eigenvalues()[i] < 0) ++m.ell;
    }
    Mat P = Mat::Zero(h, h);
    for (int i = 0; i < h; ++i)
      if (es.eigenvalues()[i] > 0)
        P += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
    m.pi11 = P;
  } else {
    m.ell = h;
  }
  int negatives = m.characteristic ? m.k - 1 : m.n_negative;
  m.n_stable = negatives - m.ell;
  if (m.n_stable < 0)
    throw FtError(ErrCode::ShootingFailure, "negative stable dimension; hypotheses violated");
  if (sys.hyp5_case == Hyp5Case::C && sys.h > 0 && m.n_stable > 0)
    throw FtError(ErrCode::ShootingFailure,
                  "case C with a nontrivial stable manifold is not supported");
  if (m.n_stable > 0) {
    Mat raw = m.stable_basis(sys.u_star);
    for (int i = 0; i < raw.cols(); ++i) {
      int imax = 0;
      for (int r = 1; r < raw.rows(); ++r)
        if (std::abs(raw(r, i)) > std::abs(raw(imax, i))) imax = r;
      if (raw(imax, i) < 0) raw.col(i) = -raw.col(i);
    }
    m.stable_ref = raw;
  }
  return m;
}

Vec beta(const SystemSpec& sys, const BoundaryLayerModel& model, const Vec& u, const Vec& u_b) {
  const int N = sys.N, h = sys.h;
  Vec r = Vec::Zero(N);
  if (h == 0) return u - u_b;
  if (sys.hyp5_case == Hyp5Case::A) {
    r.head(h) = model.pi11 * (u.head(h) - u_b.head(h));
    r.tail(N - h) = u.tail(N - h) - u_b.tail(N - h);
    return r;
  }
  r.tail(N - h) = u.tail(N - h) - u_b.tail(N - h);
  return r;
}

Vec beta_reduced(const SystemSpec& sys, const BoundaryLayerModel& model, const Vec& u,
                 const Vec& u_b) {
  const int N = sys.N, h = sys.h;
  if (h == 0) return u - u_b;
  if (sys.hyp5_case == Hyp5Case::A) {
    // independent components: coordinates along the positive eigenvectors of
    // A11(u_star) plus the parabolic block
    Eigen::SelfAdjointEigenSolver<Mat> es(sys.A(sys.u_star).topLeftCorner(h, h));
    int npos = h - model.ell;
    Vec r(npos + N - h);
    int j = 0;
    for (int i = 0; i < h; ++i)
      if (es.eigenvalues()[i] > 0)
        r[j++] = es.eigenvectors().col(i).dot(u.head(h) - u_b.head(h));
    r.tail(N - h) = u.tail(N - h) - u_b.tail(N - h);
    return r;
  }
  return u.tail(N - h) - u_b.tail(N - h);
}

CenterCurvePoint center_curve_b_k(const SystemSpec& sys, const BoundaryLayerModel& model,
                                  const Vec& u0, double s) {
  sys.clamp_check(u0, "center_curve_b_k");
  if (s == 0.0) return {u0, 0.0};
  const int N = sys.N;
  auto rhs = [&](double, const Vec& y) {
    Vec uy = y.head(N);
    Vec d(N + 1);
    d.head(N) = model.r_center(uy);
    d[N] = model.theta_center(uy);
    return d;
  };
  int steps = std::min(64, std::max(8, (int)std::ceil(std::abs(s) / 0.0078125)));
  Vec y0(N + 1);
  y0.head(N) = u0;
  y0[N] = 0.0;
  Vec y = rk4(rhs, y0, 0.0, s, steps);
  if (!sys.in_working_box(y.head(N)))
    throw FtError(ErrCode::LeftWorkingBox, "center curve exits the working box");
  return {y.head(N), y[N]};
}

ZetaEval zeta_k(const SystemSpec& sys, const BoundaryLayerModel& model, const Vec& u, double s) {
  const int k = model.k;
  double lam = lambda_of(sys, k, u);
  if (model.ld) {
    if (lam >= 0.0) return {wave_fan_curve(sys, k, u, s).state, ZetaBranch::Lax, 0.0};
    return {center_curve_b_k(sys, model, u, s).state, ZetaBranch::Layer, 0.0};
  }
  if (lam >= 0.0) {
    double sb = bar_s(sys, k, u);  // <= 0
    if (s >= sb) return {wave_fan_curve(sys, k, u, s).state, ZetaBranch::Lax, 0.0};
    Vec anchor = rarefaction_curve(sys, k, u, sb);
    return {center_curve_b_k(sys, model, anchor, s - sb).state, ZetaBranch::Layer, 0.0};
  }
  double su = underline_s(sys, k, u);  // > 0
  if (s >= su) return {wave_fan_curve(sys, k, u, s).state, ZetaBranch::Lax, 0.0};
  // layer branch; enforce the gluing with the zero-speed shock point at su
  Vec glue_target = hugoniot(sys, k, u, su).state;
  CenterCurvePoint end = center_curve_b_k(sys, model, u, su);
  Vec mismatch = glue_target - end.state;
  double raw = std::hypot(mismatch.norm(), end.z_c);
  if (raw > model.glue_guard)
    throw FtError(ErrCode::GlueMismatch,
                  "leading-order gluing residual " + std::to_string(raw) + " at s_underline");
  CenterCurvePoint p = center_curve_b_k(sys, model, u, s);
  // quadratic blend: exact at the junction, leaves the derivative at s = 0
  // (the paper allows a derivative jump at s_underline, not at 0)
  Vec corrected = p.state + (s / su) * (s / su) * mismatch;
  return {corrected, ZetaBranch::Layer, raw};
}

namespace {

// Full reduced layer ODE: (u, z) with u' = z, z' = B^{-1}(A - G) z for
// h = 0; (u, z2) with the case-A reduction otherwise.
Vec layer_rhs(const SystemSpec& sys, const Vec& y) {
  const int N = sys.N, h = sys.h;
  Vec u = y.head(N);
  Vec z = y.tail(N - h);
  Vec d(y.size());
  if (h == 0) {
    Mat G = sys.G(u, z);
    d.head(N) = z;
    d.tail(N) = sys.B(u).fullPivLu().solve((sys.A(u) - G) * z);
    return d;
  }
  Mat A = sys.A(u);
  Mat A11 = A.topLeftCorner(h, h);
  Mat A21 = A.bottomLeftCorner(N - h, h);
  Mat A22 = A.bottomRightCorner(N - h, N - h);
  Mat B22 = sys.B(u).bottomRightCorner(N - h, N - h);
  Vec uprime(N);
  uprime.head(h) = -A11.fullPivLu().solve(Mat(A21.transpose())) * z;
  uprime.tail(N - h) = z;
  Vec ufull = uprime;
  Mat G = sys.G(u, ufull);
  Mat G1 = G.bottomLeftCorner(N - h, h);
  Mat G2 = G.bottomRightCorner(N - h, N - h);
  Mat M = (G1 - A21) * A11.fullPivLu().solve(Mat(A21.transpose())) + A22 - G2;
  d.head(N) = uprime;
  d.tail(N - h) = B22.fullPivLu().solve(M * z);
  return d;
}

}  // namespace

Vec psi_s(const SystemSpec& sys, const BoundaryLayerModel& model, const Vec& w, const Vec& xi,
          bool refine) {
  if (model.n_stable == 0) return w;
  Mat basis = model.stable_basis(w);
  Vec lin = w + basis * xi;
  if (!refine || xi.norm() < 1e-12) return lin;

  const int N = sys.N, h = sys.h;
  Vec rates = model.stable_rates(w);
  double slowest = rates.maxCoeff();  // least negative
  double Y = 10.0 / std::abs(slowest);

  // seed the phase point at y = Y on the linear stable space and integrate
  // the full layer ODE backward to y = 0
  RealModes modes = real_modes(layer_matrix(sys, w));
  Vec y0(N + (N - h));
  y0.head(N) = w;
  y0.tail(N - h).setZero();
  for (int i = 0; i < model.n_stable; ++i) {
    double mu = modes.rates[i];
    Vec p = modes.vectors.col(i);
    Vec dir = lift_mode(sys, w, p);
    double scale = 1.0 / dir.norm();  // state coefficient 1 <-> unit basis column
    double c = xi[i] * std::exp(mu * Y);
    y0.head(N) += c * scale * dir;
    y0.tail(N - h) += c * scale * mu * p;
  }
  double worst = std::max(std::abs(rates.minCoeff()), std::abs(slowest));
  int steps = std::max(48, (int)std::ceil(Y * worst / 0.15));
  steps = std::min(steps, 2000);
  Vec yend;
  try {
    yend = rk4([&](double, const Vec& y) { return Vec(-layer_rhs(sys, y)); }, y0, 0.0, Y, steps);
  } catch (...) {
    throw FtError(ErrCode::ShootingFailure, "backward shooting for psi_s failed");
  }
  Vec shot = yend.head(N);
  if (!shot.allFinite() || (shot - w).norm() > 10.0 * (xi.norm() + 1e-6)) return lin;
  // one Newton correction: re-impose the requested linear coordinates
  Mat gram = basis.transpose() * basis;
  Vec xi_hat = gram.ldlt().solve(basis.transpose() * (shot - w));
  return shot + basis * (xi - xi_hat);
}

Vec phi(const SystemSpec& sys, const BoundaryLayerModel& model, const Vec& u, const Vec& xi,
        double s_k) {
  if (!model.characteristic) return psi_s(sys, model, u, xi);
  return psi_s(sys, model, zeta_k(sys, model, u, s_k).state, xi);
}

namespace {

// States along t_{lo}(., s) o ... o t_N(u_plus, s): result[j] is the state
// to the LEFT of the family-(lo+j) wave; an extra trailing entry holds
// u_plus itself.
std::vector<Vec> chain_states(const SystemSpec& sys, int lo, const Vec& u_plus,
                              const Vec& strengths) {
  const int N = sys.N;
  std::vector<Vec> st(N - lo + 2);
  st[N - lo + 1] = u_plus;
  for (int i = N; i >= lo; --i)
    st[i - lo] = wave_fan_curve(sys, i, st[i - lo + 1], strengths[i - lo]).state;
  return st;
}

}  // namespace

BRSolution solve_boundary_riemann(const SystemSpec& sys, const BoundaryLayerModel& model,
                                  const Vec& u_plus, const Vec& u_b, const BRSolution* warm) {
  const int N = sys.N;
  const int k = model.k;
  const int ns = model.n_stable;
  BRSolution sol;

  if (model.characteristic) {
    const int nup = N - k;
    const int dim = ns + 1 + nup;
    auto unpack = [&](const Vec& x, Vec& xi, double& sk, Vec& sup) {
      xi = x.head(ns);
      sk = x[ns];
      sup = x.tail(nup);
    };
    auto residual = [&](const Vec& x) {
      Vec xi, sup;
      double sk;
      unpack(x, xi, sk, sup);
      Vec w = (nup > 0) ? chain_states(sys, k + 1, u_plus, sup)[0] : u_plus;
      Vec ph = psi_s(sys, model, zeta_k(sys, model, w, sk).state, xi);
      return beta_reduced(sys, model, ph, u_b);
    };
    // linearized guess: project u_b - u_plus on the tangent directions
    Vec x_lin = Vec::Zero(dim);
    {
      EigenData ed = eigen(sys, u_plus);
      Vec r0 = beta_reduced(sys, model, u_plus, u_b);
      Mat cols(r0.size(), dim);
      Mat basis = model.stable_basis(u_plus);
      for (int i = 0; i < ns; ++i)
        cols.col(i) = beta_reduced(sys, model, u_plus + basis.col(i), u_b) - r0;
      Vec dk = lambda_of(sys, k, u_plus) >= 0 ? Vec(ed.right_vectors.col(k - 1))
                                              : model.r_center(u_plus);
      cols.col(ns) = beta_reduced(sys, model, u_plus + dk, u_b) - r0;
      for (int i = 0; i < nup; ++i)
        cols.col(ns + 1 + i) =
            beta_reduced(sys, model, u_plus + ed.right_vectors.col(k + i), u_b) - r0;
      x_lin = cols.fullPivLu().solve(-r0);
    }
    Vec x0 = x_lin;
    if (warm) {
      x0 = Vec::Zero(dim);
      if (warm->xi.size() == ns) x0.head(ns) = warm->xi;
      x0[ns] = warm->s_k;
      if (warm->s_upper.size() == nup) x0.tail(nup) = warm->s_upper;
    }
    NewtonOptions opt;
    opt.tol = 1e-10;
    opt.forward_jacobian = true;
    Vec x;
    try {
      x = newton_solve(residual, x0, opt);
    } catch (const FtError&) {
      try {
        x = newton_solve(residual, x_lin, opt);
      } catch (const FtError&) {
        x = newton_solve(residual, Vec::Zero(dim), opt);  // cold restart
      }
    }
    unpack(x, sol.xi, sol.s_k, sol.s_upper);
    if (nup > 0) {
      std::vector<Vec> st = chain_states(sys, k + 1, u_plus, sol.s_upper);
      sol.u_hat = st[0];
      sol.upper_states.assign(st.begin() + 1, st.end());
    } else {
      sol.u_hat = u_plus;
      sol.upper_states = {u_plus};
    }

    double lam = lambda_of(sys, k, sol.u_hat);
    const Vec& uh = sol.u_hat;
    BoundaryTraceState tr;
    tr.u_b = u_b;
    tr.xi = sol.xi;
    if (model.ld) {
      if (lam > kTieTol) {
        sol.branch = 7;
        sol.emitted_k = sol.s_k;
        tr.u_bar = wave_fan_curve(sys, k, uh, sol.s_k).state;
        tr.xi_k = 0.0;
      } else {
        sol.branch = 8;
        sol.emitted_k = 0.0;
        tr.u_bar = uh;
        tr.xi_k = sol.s_k;
      }
    } else if (lam >= -kTieTol) {
      double sb = bar_s(sys, k, uh);
      if (sol.s_k > kTieTol) {
        sol.branch = 1;
        sol.emitted_k = sol.s_k;
        tr.u_bar = wave_fan_curve(sys, k, uh, sol.s_k).state;
        tr.xi_k = 0.0;
      } else if (sol.s_k >= sb) {
        sol.branch = 2;
        sol.emitted_k = sol.s_k;
        tr.u_bar = wave_fan_curve(sys, k, uh, sol.s_k).state;
        tr.xi_k = 0.0;
      } else {
        sol.branch = 3;
        sol.emitted_k = sb;
        tr.u_bar = rarefaction_curve(sys, k, uh, sb);
        tr.xi_k = sol.s_k - sb;
      }
    } else {
      double su = underline_s(sys, k, uh);
      if (sol.s_k > su + kTieTol) {
        sol.branch = 4;
        sol.emitted_k = sol.s_k;
        tr.u_bar = wave_fan_curve(sys, k, uh, sol.s_k).state;
        tr.xi_k = 0.0;
      } else if (sol.s_k >= su - kTieTol) {
        sol.branch = 5;
        sol.emitted_k = 0.0;
        tr.u_bar = uh;
        tr.xi_k = sol.s_k;
      } else {
        sol.branch = 6;
        sol.emitted_k = 0.0;
        tr.u_bar = uh;
        tr.xi_k = sol.s_k;
      }
    }
    tr.branch = sol.branch;
    sol.trace = tr;
    return sol;
  }

  // non-characteristic: psi_s(., xi) o t_{k}(., s_k) ... t_N(u_plus, s_N)
  // with k the first strictly positive family
  const int nup = N - k + 1;
  const int dim = ns + nup;
  auto residual = [&](const Vec& x) {
    Vec xi = x.head(ns);
    Vec sup = x.tail(nup);
    Vec w = u_plus;
    for (int i = N; i >= k; --i) w = wave_fan_curve(sys, i, w, sup[i - k]).state;
    return beta_reduced(sys, model, psi_s(sys, model, w, xi), u_b);
  };
  Vec x_lin = Vec::Zero(dim);
  {
    EigenData ed = eigen(sys, u_plus);
    Vec r0 = beta_reduced(sys, model, u_plus, u_b);
    Mat cols(r0.size(), dim);
    Mat basis = model.stable_basis(u_plus);
    for (int i = 0; i < ns; ++i)
      cols.col(i) = beta_reduced(sys, model, u_plus + basis.col(i), u_b) - r0;
    for (int i = 0; i < nup; ++i)
      cols.col(ns + i) =
          beta_reduced(sys, model, u_plus + ed.right_vectors.col(k - 1 + i), u_b) - r0;
    x_lin = cols.fullPivLu().solve(-r0);
  }
  Vec x0 = x_lin;
  if (warm) {
    x0 = Vec::Zero(dim);
    if (warm->xi.size() == ns) x0.head(ns) = warm->xi;
    if (warm->s_upper.size() == nup) x0.tail(nup) = warm->s_upper;
  }
  NewtonOptions opt;
  opt.tol = 1e-10;
  opt.forward_jacobian = true;
  Vec x;
  try {
    x = newton_solve(residual, x0, opt);
  } catch (const FtError&) {
    try {
      x = newton_solve(residual, x_lin, opt);
    } catch (const FtError&) {
      x = newton_solve(residual, Vec::Zero(dim), opt);
    }
  }
  sol.xi = x.head(ns);
  sol.s_upper = x.tail(nup);
  sol.s_k = 0.0;
  std::vector<Vec> st = chain_states(sys, k, u_plus, sol.s_upper);
  sol.u_hat = st[0];
  sol.upper_states.assign(st.begin() + 1, st.end());
  sol.branch = 0;
  sol.emitted_k = 0.0;
  sol.trace.u_bar = sol.u_hat;
  sol.trace.xi = sol.xi;
  sol.trace.xi_k = 0.0;
  sol.trace.u_b = u_b;
  sol.trace.branch = 0;
  return sol;
}

FrontEmission accurate_boundary_fronts(const SystemSpec& sys, const BoundaryLayerModel& model,
                                       const BRSolution& sol, double r_eps, int hitting_family,
                                       FrontKind hitting_kind) {
  const int N = sys.N;
  const int k = model.k;
  WaveFan fan;
  fan.strengths = Vec::Zero(N);
  fan.intermediate_states.assign(N + 1, sol.trace.u_bar);

  if (!model.characteristic) {
    for (int i = k; i <= N; ++i) {
      fan.strengths[i - 1] = sol.s_upper[i - k];
      fan.intermediate_states[i] = sol.upper_states[i - k];
    }
    return accurate_fronts(sys, 0, fan, r_eps, {});
  }

  fan.strengths[k - 1] = (std::abs(sol.emitted_k) > 1e-13) ? sol.emitted_k : 0.0;
  fan.intermediate_states[k - 1] = sol.trace.u_bar;
  fan.intermediate_states[k] = sol.u_hat;
  for (int i = k + 1; i <= N; ++i) {
    fan.strengths[i - 1] = sol.s_upper[i - k - 1];
    fan.intermediate_states[i] = sol.upper_states[i - k - 1];
  }

  std::set<int> exempt;
  bool k_is_raref = fan.strengths[k - 1] < 0 &&
                    sys.field_kinds[k - 1] == FieldKind::GenuinelyNonlinear;
  if (k_is_raref) {
    if (sol.branch == 2 && hitting_family == k && hitting_kind == FrontKind::Rarefaction)
      exempt.insert(k);
    if (sol.branch == 3 && hitting_family == k) exempt.insert(k);
  }
  return accurate_fronts(sys, k, fan, r_eps, exempt);
}

SimplifiedBoundaryResult simplified_boundary_fronts(const SystemSpec& sys,
                                                    const BoundaryLayerModel& model,
                                                    const Front& hitting,
                                                    const BoundaryTraceState& trace,
                                                    double lambda_hat, double r_eps) {
  SimplifiedBoundaryResult res;
  res.emission.simplified = true;
  if (!model.characteristic || hitting.family < model.k) {
    ProtoFront np;
    np.family = sys.N + 1;
    np.kind = FrontKind::NonPhysical;
    np.s = (hitting.right_state - hitting.left_state).norm();
    np.left_state = hitting.left_state;
    np.right_state = hitting.right_state;
    np.speed = lambda_hat;
    np.no_jitter = true;
    res.emission.fronts.push_back(np);
    res.trace = trace;
    res.trace_changed = false;
    return res;
  }
  // k-family hit: accurate solve, but only the k-wave is emitted; the upper
  // families are lumped into a non-physical front between u_hat and u_plus.
  BRSolution warm;
  warm.xi = trace.xi;
  warm.s_k = trace.xi_k + hitting.s;
  warm.s_upper = Vec::Zero(sys.N - model.k);
  BRSolution sol = solve_boundary_riemann(sys, model, hitting.right_state, trace.u_b, &warm);
  FrontEmission acc = accurate_boundary_fronts(sys, model, sol, r_eps, hitting.family,
                                               hitting.kind);
  for (const ProtoFront& f : acc.fronts)
    if (f.family == model.k) res.emission.fronts.push_back(f);
  if ((hitting.right_state - sol.u_hat).norm() >= 1e-13) {
    ProtoFront np;
    np.family = sys.N + 1;
    np.kind = FrontKind::NonPhysical;
    np.s = (hitting.right_state - sol.u_hat).norm();
    np.left_state = sol.u_hat;
    np.right_state = hitting.right_state;
    np.speed = lambda_hat;
    np.no_jitter = true;
    res.emission.fronts.push_back(np);
  }
  res.trace = sol.trace;
  res.trace_changed = true;
  return res;
}

double trace_property_violation(const SystemSpec& sys, const BoundaryLayerModel& model,
                                const BoundaryTraceState& trace) {
  if (!model.characteristic) return std::abs(trace.xi_k);
  double lam = lambda_of(sys, model.k, trace.u_bar);
  if (model.ld) return lam > kTieTol ? std::abs(trace.xi_k) : 0.0;
  if (lam > kTieTol) return std::abs(trace.xi_k);
  double su = underline_s(sys, model.k, trace.u_bar);
  return std::max(0.0, trace.xi_k - su - 1e-10);
}

}  // namespace fronttrack
