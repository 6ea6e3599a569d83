#include "fronttrack/riemann.hpp"

#include <cmath>

#include "fronttrack/numerics.hpp"

namespace fronttrack {

namespace {
constexpr double kStrengthFloor = 1e-13;
}

FrontKind kind_of(const SystemSpec& sys, int family, double s) {
  if (sys.field_kinds[family - 1] == FieldKind::LinearlyDegenerate) return FrontKind::Contact;
  return s > 0 ? FrontKind::Shock : FrontKind::Rarefaction;
}

WaveFan fan_from_strengths(const SystemSpec& sys, const Vec& u_plus, const Vec& strengths) {
  const int N = sys.N;
  WaveFan fan;
  fan.strengths = strengths;
  fan.intermediate_states.assign(N + 1, Vec());
  fan.intermediate_states[N] = u_plus;
  for (int i = N; i >= 1; --i)
    fan.intermediate_states[i - 1] =
        wave_fan_curve(sys, i, fan.intermediate_states[i], strengths[i - 1]).state;
  return fan;
}

WaveFan solve_riemann(const SystemSpec& sys, const Vec& u_minus, const Vec& u_plus) {
  const int N = sys.N;
  auto residual = [&](const Vec& s) {
    Vec w = u_plus;
    for (int i = N; i >= 1; --i) w = wave_fan_curve(sys, i, w, s[i - 1]).state;
    return Vec(w - u_minus);
  };
  NewtonOptions opt;
  opt.tol = 1e-11;
  opt.forward_jacobian = true;
  Vec s0 = Vec::Zero(N);
  try {
    Vec s = newton_solve(residual, s0, opt);
    return fan_from_strengths(sys, u_plus, s);
  } catch (const FtError&) {
    // fallback initial guess: project the jump on the left eigenvectors
    EigenData ed = eigen(sys, u_plus);
    Vec guess = ed.left_vectors * (u_minus - u_plus);
    Vec s = newton_solve(residual, guess, opt);
    return fan_from_strengths(sys, u_plus, s);
  }
}

namespace {

// Shock/contact front with its Lax window; rarefactions get lambda of the
// right state per the front-speed rule.
ProtoFront physical_front(const SystemSpec& sys, int k, int family, double s, const Vec& left,
                          const Vec& right, double speed, FrontKind kind) {
  ProtoFront f;
  f.family = family;
  f.kind = kind;
  f.s = s;
  f.left_state = left;
  f.right_state = right;
  f.speed = speed;
  if (kind == FrontKind::Shock) {
    f.lax_lo = lambda_of(sys, family, right);
    f.lax_hi = lambda_of(sys, family, left);
  }
  if (family == k && sys.field_kinds[k - 1] == FieldKind::GenuinelyNonlinear) {
    double vs = varsigma(sys, k, right, s);
    f.keep_sign_nonneg = vs >= 0.0;
  } else if (family == k) {
    f.keep_sign_nonneg = lambda_of(sys, k, right) >= 0.0;
  }
  return f;
}

}  // namespace

FrontEmission accurate_fronts(const SystemSpec& sys, int k, const WaveFan& fan, double r_eps,
                              const std::set<int>& exempt) {
  const int N = sys.N;
  FrontEmission em;
  for (int i = 1; i <= N; ++i) {
    double s = fan.strengths[i - 1];
    if (std::abs(s) < kStrengthFloor) continue;
    const Vec& left = fan.intermediate_states[i - 1];
    const Vec& right = fan.intermediate_states[i];
    FrontKind kind = kind_of(sys, i, s);
    if (kind == FrontKind::Shock) {
      double sg = sigma_speed(sys, i, right, s);
      em.fronts.push_back(physical_front(sys, k, i, s, left, right, sg, kind));
    } else if (kind == FrontKind::Contact) {
      double sp = lambda_of(sys, i, right);
      em.fronts.push_back(physical_front(sys, k, i, s, left, right, sp, kind));
    } else {
      int m = 1;
      if (!exempt.count(i)) m = std::max(1, (int)std::ceil(std::abs(s) / r_eps - 1e-9));
      for (int j = 1; j <= m; ++j) {
        // piece j counted from the left; right state of piece j sits at
        // parameter s*(m-j)/m along the curve from `right`
        Vec rj = (j == m) ? right : rarefaction_curve(sys, i, right, s * (m - j) / m);
        Vec lj = (j == 1) ? left : rarefaction_curve(sys, i, right, s * (m - j + 1) / m);
        double sp = lambda_of(sys, i, rj);
        em.fronts.push_back(physical_front(sys, k, i, s / m, lj, rj, sp, kind));
      }
    }
  }
  return em;
}

FrontEmission simplified_fronts(const SystemSpec& sys, int k, const Front& a, const Front& b,
                                double lambda_hat) {
  FrontEmission em;
  em.simplified = true;
  const Vec& uL = a.left_state;
  const Vec& uR = b.right_state;

  auto np_front = [&](const Vec& left, const Vec& right) {
    ProtoFront f;
    f.family = sys.N + 1;
    f.kind = FrontKind::NonPhysical;
    f.s = (right - left).norm();
    f.left_state = left;
    f.right_state = right;
    f.speed = lambda_hat;
    f.no_jitter = true;
    return f;
  };
  auto phys = [&](int family, double s, const Vec& left, const Vec& right) {
    FrontKind kind = kind_of(sys, family, s);
    double sp = kind == FrontKind::Shock ? sigma_speed(sys, family, right, s)
                                         : lambda_of(sys, family, right);
    return physical_front(sys, k, family, s, left, right, sp, kind);
  };

  if (a.kind == FrontKind::NonPhysical) {
    // non-physical front overtakes a physical one
    Vec w = right_state_from_left(sys, b.family, uL, b.s);
    em.fronts.push_back(phys(b.family, b.s, uL, w));
    if ((uR - w).norm() >= kStrengthFloor) em.fronts.push_back(np_front(w, uR));
    return em;
  }
  if (b.kind == FrontKind::NonPhysical)
    throw FtError(ErrCode::NewtonDivergence,
                  "physical front cannot overtake a non-physical one");

  if (a.family == b.family) {
    double s = a.s + b.s;
    if (std::abs(s) >= kStrengthFloor) {
      Vec w = right_state_from_left(sys, a.family, uL, s);
      em.fronts.push_back(phys(a.family, s, uL, w));
      if ((uR - w).norm() >= kStrengthFloor) em.fronts.push_back(np_front(w, uR));
    } else if ((uR - uL).norm() >= kStrengthFloor) {
      em.fronts.push_back(np_front(uL, uR));
    }
    return em;
  }

  // distinct families: a is faster (higher family), they cross
  int slow = b.family, fast = a.family;
  Vec w = right_state_from_left(sys, slow, uL, b.s);
  Vec what = right_state_from_left(sys, fast, w, a.s);
  em.fronts.push_back(phys(slow, b.s, uL, w));
  em.fronts.push_back(phys(fast, a.s, w, what));
  if ((uR - what).norm() >= kStrengthFloor) em.fronts.push_back(np_front(what, uR));
  return em;
}

}  // namespace fronttrack
