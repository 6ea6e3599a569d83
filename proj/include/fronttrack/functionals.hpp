#ifndef FRONTTRACK_FUNCTIONALS_HPP
#define FRONTTRACK_FUNCTIONALS_HPP

#include <map>
#include <string>
#include <vector>

#include "fronttrack/boundary.hpp"
#include "fronttrack/fronts.hpp"
#include "fronttrack/systems.hpp"

namespace fronttrack {

struct FunctionalConstants {
  double A_weight = 4.0;
  double K1 = 8.0, K2 = 4.0, K3 = 4.0, K4 = 4.0, K5 = 4.0;
  double delta = 0.05;
  double delta_star = 0.01;
  std::map<std::string, double> measured_C;
  bool chain_ok = false;

  double C(const std::string& name, double dflt = 0.0) const {
    auto it = measured_C.find(name);
    return it == measured_C.end() ? dflt : it->second;
  }
};

struct FunctionalSnapshot {
  double t = 0;
  double V = 0, Q = 0, R = 0, S = 0, Z = 0;
  double Upsilon = 0;
  double F = 0, Lambda = 0;
  double xi_k_abs = 0;
};

// Weighted signed strength: A*s below the boundary characteristic family,
// s at and above it, |u+ - u-| for non-physical fronts.
double theta_weight(const Front& f, int k, double A_weight);

// Approaching-pair rule: Cauchy-problem rule, except that two fronts of the
// k-th family always approach.  `a` must be to the left of `b`.
bool approaching(const Front& a, const Front& b, int k,
                 const std::vector<FieldKind>& kinds);

// View of the simulation state sufficient to evaluate the functionals.
struct FunctionalInput {
  double t = 0;
  const std::vector<Front>* fronts = nullptr;
  const BoundaryTraceState* trace = nullptr;
  const DatumSchedule* datum = nullptr;
  double flux_trace_tv = 0;       // accumulated F(t)
  bool before_event = false;      // evaluate Z at t^- (jump at t counts)
};

FunctionalSnapshot compute_functionals(const SystemSpec& sys, const BoundaryLayerModel& model,
                                       const FunctionalInput& in,
                                       const FunctionalConstants& c);

enum class EventKind {
  InteriorAccurate,
  InteriorSimplified,
  InteriorNonPhysical,
  BoundaryHitBelowK,
  BoundaryHitK,
  DatumJump,
  Retire,
};

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::InteriorAccurate: return "interior-accurate";
    case EventKind::InteriorSimplified: return "interior-simplified";
    case EventKind::InteriorNonPhysical: return "interior-np";
    case EventKind::BoundaryHitBelowK: return "boundary-hit-j";
    case EventKind::BoundaryHitK: return "boundary-hit-k";
    case EventKind::DatumJump: return "datum-jump";
    case EventKind::Retire: return "retire";
  }
  return "?";
}

struct EventRecord {
  EventKind kind;
  bool accurate = true;
  double t = 0;
  double x = 0;
  double s_a = 0, s_b = 0;      // incoming strengths (interior)
  double s_hit = 0;             // hitting strength (boundary)
  double varsigma_minus = 0;    // [varsigma_k]^- of the hitting front
  double xi_k_before = 0;
  double datum_jump = 0;        // |u_b^+ - u_b^-|
  std::vector<int> families;
};

struct Verdict {
  EventRecord event;
  double delta_upsilon = 0;
  double bound = 0;  // required upper bound on delta_upsilon (already slackened)
  bool pass = true;
  double delta_lambda = 0;
  bool lambda_pass = true;
};

// Classifies the bracketed event and checks the quantified decrease with the
// given slack factor.
Verdict check_event_decrease(const FunctionalSnapshot& before, const FunctionalSnapshot& after,
                             const EventRecord& ev, double slack = 1.05);

struct CalibrationOptions {
  int samples = 400;
  double max_strength = 0.05;
  double max_xi = 0.03;
  std::uint64_t seed = 7;
  double margin = 2.0;       // safety factor on the composed constants
  int max_doublings = 20;
};

// Measures the interaction constants C_1..C_14 on sweeps and composes
// (A, K_1..K_5, delta, delta_star) along the paper's ordering, with the
// given safety margin.  Implemented in calibrate.cpp.
FunctionalConstants calibrate(const SystemSpec& sys, const BoundaryLayerModel& model,
                              const CalibrationOptions& opts = {});

}  // namespace fronttrack

#endif
