#ifndef FRONTTRACK_NUMERICS_HPP
#define FRONTTRACK_NUMERICS_HPP

#include <cmath>
#include <functional>

#include "fronttrack/types.hpp"

namespace fronttrack {

// Central-difference step: cbrt(eps)*(1+|x|) balances truncation and roundoff.
inline double fd_step(double scale) { return 6.055e-6 * (1.0 + std::abs(scale)); }

// Classical RK4 with fixed step count.
template <typename F>
Vec rk4(const F& rhs, Vec y0, double t0, double t1, int steps) {
  double h = (t1 - t0) / steps;
  Vec y = std::move(y0);
  double t = t0;
  for (int i = 0; i < steps; ++i) {
    Vec k1 = rhs(t, y);
    Vec k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
    Vec k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
    Vec k4 = rhs(t + h, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return y;
}

struct NewtonOptions {
  double tol = 1e-12;
  int max_iter = 50;
  int max_halvings = 40;
  bool forward_jacobian = false;  // one-sided differences (half the evals)
};

// Damped Newton with finite-difference Jacobian and a Levenberg-Marquardt
// fallback for kinked residuals. Throws NewtonDivergence.
inline Vec newton_solve(const std::function<Vec(const Vec&)>& f, Vec x0,
                        const NewtonOptions& opt = {}) {
  Vec x = std::move(x0);
  const int n = static_cast<int>(x.size());
  Vec fx = f(x);
  double r = fx.norm();
  for (int it = 0; it < opt.max_iter; ++it) {
    if (r <= opt.tol) return x;
    Mat J(fx.size(), n);
    for (int j = 0; j < n; ++j) {
      double h = fd_step(x[j]) * 0.2;
      Vec xp = x;
      xp[j] += h;
      if (opt.forward_jacobian) {
        J.col(j) = (f(xp) - fx) / h;
      } else {
        Vec xm = x;
        xm[j] -= h;
        J.col(j) = (f(xp) - f(xm)) / (2.0 * h);
      }
    }
    auto try_direction = [&](const Vec& dx) {
      double lambda = 1.0;
      for (int k = 0; k < opt.max_halvings; ++k) {
        Vec xt = x + lambda * dx;
        Vec ft = f(xt);
        double rt = ft.norm();
        if (rt < r || rt <= opt.tol) {
          x = xt;
          fx = ft;
          r = rt;
          return true;
        }
        lambda *= 0.5;
      }
      return false;
    };
    bool accepted = try_direction(J.fullPivLu().solve(-fx));
    if (!accepted) {
      Mat JtJ = J.transpose() * J;
      Vec Jtf = J.transpose() * fx;
      double mu = 1e-8 * (1.0 + JtJ.diagonal().maxCoeff());
      for (int lm = 0; lm < 8 && !accepted; ++lm) {
        Vec dx = (JtJ + mu * Mat::Identity(n, n)).ldlt().solve(-Jtf);
        accepted = try_direction(dx);
        mu *= 100.0;
      }
    }
    if (!accepted) throw FtError(ErrCode::NewtonDivergence, "line search exhausted");
  }
  if (r <= opt.tol * 100) return x;
  throw FtError(ErrCode::NewtonDivergence, "no convergence after max iterations, residual " +
                                               std::to_string(r));
}

// Root of a scalar strictly monotone-ish function on [a, b]; bracketed
// secant with bisection fallback. Throws NoRoot if f(a), f(b) same sign.
inline double bracketed_root(const std::function<double(double)>& f, double a, double b,
                             double tol = 1e-12) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw FtError(ErrCode::NoRoot, "no sign change in bracket");
  double x = a - fa * (b - a) / (fb - fa);
  for (int it = 0; it < 200; ++it) {
    double fx = f(x);
    if (std::abs(fx) <= tol || (b - a) < 1e-16 * (1 + std::abs(a))) return x;
    double xn;
    if (fa * fx < 0.0) {
      xn = x - fx * (x - a) / (fx - fa);
      b = x;
      fb = fx;
    } else {
      xn = x - fx * (b - x) / (fb - fx);
      a = x;
      fa = fx;
    }
    if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
    x = xn;
  }
  return x;
}

// splitmix64: deterministic jitter hashing.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in (0, 1] from a hash.
inline double hash_unit(uint64_t seed, uint64_t id) {
  uint64_t h = splitmix64(seed ^ splitmix64(id));
  return (static_cast<double>(h >> 11) + 1.0) / 9007199254740993.0;
}

}  // namespace fronttrack

#endif
