#include "fronttrack/wavecurves.hpp"

#include <cmath>

#include "fronttrack/cache.hpp"
#include "fronttrack/numerics.hpp"

namespace fronttrack {

namespace {
thread_local ByteCache<Vec> g_raref_cache;
thread_local ByteCache<std::pair<Vec, double>> g_hugoniot_cache;
thread_local ByteCache<double> g_root_cache;
}  // namespace

double lambda_of(const SystemSpec& sys, int family, const Vec& u) {
  return eigen_raw(sys, u).lambdas[family - 1];
}

namespace {

void check_smax(const SystemSpec& sys, double s, const char* who) {
  if (std::abs(s) > sys.s_max + 1e-12)
    throw FtError(ErrCode::LeftWorkingBox,
                  std::string(who) + ": strength " + std::to_string(s) + " beyond s_max");
}

}  // namespace

Vec rarefaction_curve(const SystemSpec& sys, int family, const Vec& u, double s) {
  check_smax(sys, s, "rarefaction_curve");
  sys.clamp_check(u, "rarefaction_curve");
  if (s == 0.0) return u;
  std::string key = cache_key(sys.instance_id, 10 + family, u, s);
  if (const Vec* hit = g_raref_cache.find(key)) return *hit;
  // step size bounded by s_max/64; fewer steps for small strengths
  int steps = std::min(64, std::max(4, (int)std::ceil(std::abs(s) / (sys.s_max / 64.0))));
  double h = s / steps;
  Vec y = u;
  for (int i = 0; i < steps; ++i) {
    auto rhs = [&](double, const Vec& x) { return Vec(eigen(sys, x).right_vectors.col(family - 1)); };
    Vec k1 = rhs(0, y);
    Vec k2 = rhs(0, y + 0.5 * h * k1);
    Vec k3 = rhs(0, y + 0.5 * h * k2);
    Vec k4 = rhs(0, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!sys.in_working_box(y))
      throw FtError(ErrCode::LeftWorkingBox, "rarefaction curve exits the working box");
  }
  g_raref_cache.put(std::move(key), y);
  return y;
}

CurveEval hugoniot(const SystemSpec& sys, int family, const Vec& u, double s) {
  check_smax(sys, s, "hugoniot");
  sys.clamp_check(u, "hugoniot");
  const int N = sys.N;
  EigenData ed = eigen(sys, u);
  if (s == 0.0) return {u, ed.lambdas[family - 1], WaveBranch::Shock};
  std::string key = cache_key(sys.instance_id, 20 + family, u, s);
  if (const auto* hit = g_hugoniot_cache.find(key))
    return {hit->first, hit->second, WaveBranch::Shock};

  Vec g0 = sys.conserved(sys.v_of_u(u));
  Vec f0 = sys.flux(sys.v_of_u(u));
  Vec l_anchor = ed.left_vectors.row(family - 1).transpose();

  // Unknowns (w, sigma); residual: RH conditions plus the parametrization
  // constraint l_i(u) . (w - u) = s_cur.
  auto residual = [&](const Vec& x, double s_cur) {
    Vec w = x.head(N);
    double sg = x[N];
    Vec r(N + 1);
    r.head(N) = sys.flux(sys.v_of_u(w)) - f0 - sg * (sys.conserved(sys.v_of_u(w)) - g0);
    r[N] = l_anchor.dot(w - u) - s_cur;
    return r;
  };

  // the parametrization constraint pins the endpoint regardless of the path,
  // so the continuation grid only seeds Newton
  const double ds_max = std::max(std::min(1e-2, std::abs(s) / 2.0), 1e-12);
  const double sgn = s > 0 ? 1.0 : -1.0;

  Vec x(N + 1);
  x.head(N) = u;
  x[N] = ed.lambdas[family - 1];
  double s_cur = 0.0;
  while (std::abs(s - s_cur) > 1e-15 * std::abs(s)) {
    double step = sgn * std::min(ds_max, std::abs(s - s_cur));
    bool ok = false;
    while (!ok) {
      Vec xp = x;
      xp.head(N) += step * eigen(sys, x.head(N)).right_vectors.col(family - 1);
      double target = s_cur + step;
      try {
        NewtonOptions opt;
        opt.tol = 1e-12;
        opt.max_iter = 50;
        Vec sol = newton_solve([&](const Vec& y) { return residual(y, target); }, xp, opt);
        x = sol;
        s_cur = target;
        ok = true;
      } catch (const FtError&) {
        step *= 0.5;
        if (std::abs(step) < 1e-6 * std::abs(s))
          throw FtError(ErrCode::ContinuationFailure,
                        "hugoniot continuation stalled at s = " + std::to_string(s_cur));
      }
    }
    if (!sys.in_working_box(x.head(N)))
      throw FtError(ErrCode::LeftWorkingBox, "hugoniot locus exits the working box");
  }
  g_hugoniot_cache.put(std::move(key), {x.head(N), x[N]});
  return {x.head(N), x[N], WaveBranch::Shock};
}

double sigma_speed(const SystemSpec& sys, int family, const Vec& u, double s) {
  return hugoniot(sys, family, u, s).speed;
}

CurveEval wave_fan_curve(const SystemSpec& sys, int family, const Vec& u, double s) {
  if (sys.field_kinds[family - 1] == FieldKind::LinearlyDegenerate) {
    Vec w = rarefaction_curve(sys, family, u, s);
    return {w, lambda_of(sys, family, u), WaveBranch::Contact};
  }
  if (s > 0.0) return hugoniot(sys, family, u, s);
  Vec w = rarefaction_curve(sys, family, u, s);
  return {w, lambda_of(sys, family, w), WaveBranch::Rarefaction};
}

double varsigma(const SystemSpec& sys, int k, const Vec& u, double s) {
  if (sys.field_kinds[k - 1] == FieldKind::LinearlyDegenerate) return lambda_of(sys, k, u);
  if (s >= 0.0) return hugoniot(sys, k, u, s).speed;
  return lambda_of(sys, k, rarefaction_curve(sys, k, u, s));
}

double underline_s(const SystemSpec& sys, int k, const Vec& u) {
  auto f = [&](double s) { return hugoniot(sys, k, u, s).speed; };
  double lam = lambda_of(sys, k, u);
  if (std::abs(lam) <= 1e-13) return 0.0;
  std::string key = cache_key(sys.instance_id, 40 + k, u);
  if (const double* hit = g_root_cache.find(key)) return *hit;
  // sigma is strictly increasing with slope ~ 1/2; bracket around -2*lambda.
  double guess = -2.0 * lam;
  double lo = std::max(-sys.s_max, std::min(0.0, guess) - 0.5 * std::abs(guess) - 1e-4);
  double hi = std::min(sys.s_max, std::max(0.0, guess) + 0.5 * std::abs(guess) + 1e-4);
  double root = bracketed_root(f, lo, hi, 1e-12);
  g_root_cache.put(std::move(key), root);
  return root;
}

double bar_s(const SystemSpec& sys, int k, const Vec& u) {
  auto f = [&](double s) { return lambda_of(sys, k, rarefaction_curve(sys, k, u, s)); };
  double lam = lambda_of(sys, k, u);
  if (std::abs(lam) <= 1e-13) return 0.0;
  std::string key = cache_key(sys.instance_id, 60 + k, u);
  if (const double* hit = g_root_cache.find(key)) return *hit;
  double guess = -lam;
  double lo = std::max(-sys.s_max, std::min(0.0, guess) - 0.5 * std::abs(guess) - 1e-4);
  double hi = std::min(sys.s_max, std::max(0.0, guess) + 0.5 * std::abs(guess) + 1e-4);
  double root = bracketed_root(f, lo, hi, 1e-12);
  g_root_cache.put(std::move(key), root);
  return root;
}

Vec right_state_from_left(const SystemSpec& sys, int family, const Vec& u_left, double s) {
  if (s == 0.0) return u_left;
  Vec guess = u_left - s * eigen(sys, u_left).right_vectors.col(family - 1);
  NewtonOptions opt;
  opt.tol = 1e-11;
  return newton_solve(
      [&](const Vec& w) { return Vec(wave_fan_curve(sys, family, w, s).state - u_left); }, guess,
      opt);
}

}  // namespace fronttrack
