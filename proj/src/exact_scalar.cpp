#include <algorithm>
#include <cmath>

#include "fronttrack/verify.hpp"

namespace fronttrack {

namespace {

// Minimal exact front for the scalar solver.
struct SFront {
  double x0, t0, speed, left, right;
  double pos(double t) const { return x0 + speed * (t - t0); }
};

// Burgers Riemann solution sampled at slope 0+ (the boundary trace a
// boundary datum enforces).
double rp_value_at_zero(double ul, double ur) {
  if (ul > ur) {  // shock
    double sg = 0.5 * (ul + ur);
    return sg > 0 ? ul : ur;
  }
  if (ul < ur) {  // rarefaction, slopes from ul to ur
    if (ul >= 0) return ul;
    if (ur <= 0) return ur;
    return 0.0;
  }
  return ur;
}

class Sim {
 public:
  Sim(const PiecewiseProfile& u0, const DatumSchedule& ub, double res)
      : ub_(ub), res_(res) {
    trace_ = u0.values.front()[0];
    for (std::size_t j = 0; j < u0.breaks.size(); ++j)
      emit_rp(u0.breaks[j], 0.0, u0.values[j][0], u0.values[j + 1][0]);
    boundary_update(0.0);
  }

  void advance_to(double t_target) {
    while (true) {
      double te = t_target;
      int kind = 0;  // 0 finish, 1 merge, 2 hit, 3 jump
      std::size_t idx = 0;
      for (std::size_t i = 0; i + 1 < fronts_.size(); ++i) {
        double dv = fronts_[i].speed - fronts_[i + 1].speed;
        if (dv <= 1e-16) continue;
        double tc = t_ + std::max(0.0, fronts_[i + 1].pos(t_) - fronts_[i].pos(t_)) / dv;
        if (tc < te) {
          te = tc;
          kind = 1;
          idx = i;
        }
      }
      if (!fronts_.empty() && fronts_.front().speed < 0) {
        double th = t_ - fronts_.front().pos(t_) / fronts_.front().speed;
        if (th < te) {
          te = th;
          kind = 2;
        }
      }
      for (std::size_t i = 1; i < ub_.times.size(); ++i)
        if (ub_.times[i] > t_ + 1e-15 && ub_.times[i] < te) {
          te = ub_.times[i];
          kind = 3;
          break;
        }
      if (kind == 0) {
        t_ = t_target;
        return;
      }
      t_ = te;
      if (kind == 1) {
        double ul = fronts_[idx].left, ur = fronts_[idx + 1].right;
        double x = 0.5 * (fronts_[idx].pos(te) + fronts_[idx + 1].pos(te));
        fronts_.erase(fronts_.begin() + idx, fronts_.begin() + idx + 2);
        emit_rp(x, te, ul, ur, idx);
      } else if (kind == 2) {
        trace_ = fronts_.front().right;
        fronts_.erase(fronts_.begin());
        boundary_update(te);
      } else {
        boundary_update(te);
      }
    }
  }

  double sample(double x) const {
    double v = trace_;
    for (const SFront& f : fronts_) {
      if (f.pos(t_) <= x) v = f.right;
      else break;
    }
    return v;
  }

  PiecewiseProfile profile() const {
    PiecewiseProfile p;
    p.values.push_back(Vec::Constant(1, trace_));
    for (const SFront& f : fronts_) {
      p.breaks.push_back(f.pos(t_));
      p.values.push_back(Vec::Constant(1, f.right));
    }
    return p;
  }

 private:
  void emit_rp(double x, double t, double ul, double ur, std::size_t hint = SIZE_MAX) {
    std::vector<SFront> waves;
    if (ul > ur + 1e-15) {
      waves.push_back({x, t, 0.5 * (ul + ur), ul, ur});
    } else if (ur > ul + 1e-15) {
      int m = std::max(1, (int)std::ceil((ur - ul) / res_));
      for (int j = 1; j <= m; ++j) {
        double a = ul + (ur - ul) * (j - 1) / m;
        double b = ul + (ur - ul) * j / m;
        waves.push_back({x, t, 0.5 * (a + b), a, b});
      }
    }
    std::size_t pos;
    if (hint != SIZE_MAX) {
      pos = std::min(hint, fronts_.size());
    } else {
      pos = 0;
      while (pos < fronts_.size() && fronts_[pos].pos(t_) < x) ++pos;
    }
    fronts_.insert(fronts_.begin() + pos, waves.begin(), waves.end());
  }

  void boundary_update(double t) {
    double ub = ub_.at(t)[0];
    double v0 = rp_value_at_zero(ub, trace_);
    if (std::abs(v0 - trace_) < 1e-15) return;
    double old = trace_;
    trace_ = v0;
    // entering waves between v0 (left) and old (right)
    std::vector<SFront> waves;
    if (v0 > old) {
      waves.push_back({0.0, t, 0.5 * (v0 + old), v0, old});
    } else {
      int m = std::max(1, (int)std::ceil((old - v0) / res_));
      for (int j = 1; j <= m; ++j) {
        double a = v0 + (old - v0) * (j - 1) / m;
        double b = v0 + (old - v0) * j / m;
        waves.push_back({0.0, t, 0.5 * (a + b), a, b});
      }
    }
    fronts_.insert(fronts_.begin(), waves.begin(), waves.end());
  }

  DatumSchedule ub_;
  double res_;
  double t_ = 0;
  double trace_ = 0;
  std::vector<SFront> fronts_;
};

}  // namespace

ExactScalar::ExactScalar(PiecewiseProfile u0, DatumSchedule ub, double fan_resolution)
    : u0_(std::move(u0)), ub_(std::move(ub)), res_(fan_resolution) {}

double ExactScalar::eval(double t, double x) const {
  Sim s(u0_, ub_, res_);
  s.advance_to(t);
  return s.sample(x);
}

PiecewiseProfile ExactScalar::profile(double t) const {
  Sim s(u0_, ub_, res_);
  s.advance_to(t);
  return s.profile();
}

double exact_scalar(const PiecewiseProfile& u0, const DatumSchedule& ub, double t, double x) {
  return ExactScalar(u0, ub).eval(t, x);
}

double l1_distance(const PiecewiseProfile& a, const PiecewiseProfile& b, double lo, double hi) {
  std::vector<double> cuts{lo, hi};
  for (double x : a.breaks)
    if (x > lo && x < hi) cuts.push_back(x);
  for (double x : b.breaks)
    if (x > lo && x < hi) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  double d = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    d += (a.at(mid) - b.at(mid)).norm() * (cuts[i + 1] - cuts[i]);
  }
  return d;
}

PiecewiseProfile profile_from_snapshot(const ProfileSnapshot& snap) {
  PiecewiseProfile p;
  p.breaks = snap.xs;
  p.values = snap.states;
  return p;
}

}  // namespace fronttrack
