#ifndef FRONTTRACK_FRONTS_HPP
#define FRONTTRACK_FRONTS_HPP

#include <cstdint>
#include <vector>

#include "fronttrack/types.hpp"

namespace fronttrack {

enum class FrontKind { Shock, Rarefaction, Contact, NonPhysical };

inline const char* to_string(FrontKind k) {
  switch (k) {
    case FrontKind::Shock: return "shock";
    case FrontKind::Rarefaction: return "rarefaction";
    case FrontKind::Contact: return "contact";
    case FrontKind::NonPhysical: return "non-physical";
  }
  return "?";
}

// A front produced by a solver before the tracker assigns id, position and
// jittered speed.  Fronts in an emission are ordered left to right.
struct ProtoFront {
  int family = 0;  // 1..N for physical, N+1 for non-physical
  FrontKind kind = FrontKind::Shock;
  double s = 0.0;  // signed strength; |u+ - u-| for non-physical
  Vec left_state;
  Vec right_state;
  double speed = 0.0;     // nominal speed before jitter
  double lax_lo = -1e300;  // admissible speed window
  double lax_hi = 1e300;
  bool keep_sign_nonneg = false;  // (incidono): speed must stay >= 0
  bool no_jitter = false;         // non-physical fronts keep exactly lambda_hat
};

struct FrontEmission {
  std::vector<ProtoFront> fronts;
  bool simplified = false;
};

// One discontinuity line of the tracked solution.
struct Front {
  std::int64_t id = 0;
  int family = 0;
  FrontKind kind = FrontKind::Shock;
  double s = 0.0;
  Vec left_state;
  Vec right_state;
  double speed = 0.0;
  double x_ref = 0.0;  // position at t_ref
  double t_ref = 0.0;
  int generation = 1;
  double birth_time = 0.0;
  double varsigma_cache = 0.0;  // varsigma_k(right_state, s) for k-family fronts
  bool retired = false;

  double position(double t) const { return x_ref + speed * (t - t_ref); }
};

// Trace data at x = 0+: the adjacent state, the stable-manifold coordinates
// of the boundary layer and the center coordinate xi_k.
struct BoundaryTraceState {
  Vec u_bar;
  Vec xi;           // xi_{ell+1} .. xi_{k-1}
  double xi_k = 0.0;
  Vec u_b;
  int branch = 0;  // 1..6 per the GNL classification, 7..8 LD, 0 non-characteristic
};

// Piecewise-constant boundary datum: value[i] on [time[i], time[i+1]).
struct DatumSchedule {
  std::vector<double> times;  // times[0] = 0
  std::vector<Vec> values;

  const Vec& at(double t) const {
    std::size_t i = 0;
    while (i + 1 < times.size() && t >= times[i + 1] - 1e-15) ++i;
    return values[i];
  }
  // Total variation of the datum restricted to ]t, +inf[ (or [t, +inf[ when
  // inclusive, for evaluating Z just before a jump).
  double remaining_tv(double t, bool inclusive = false) const {
    double tv = 0.0;
    double cut = inclusive ? t - 1e-12 : t + 1e-12;
    for (std::size_t i = 1; i < times.size(); ++i)
      if (times[i] > cut) tv += (values[i] - values[i - 1]).norm();
    return tv;
  }
};

}  // namespace fronttrack

#endif
