#ifndef FRONTTRACK_VERIFY_HPP
#define FRONTTRACK_VERIFY_HPP

#include <optional>
#include <string>

#include "fronttrack/tracker.hpp"

namespace fronttrack {

// ---------------------------------------------------------------------------
// Exact scalar (Burgers) IBVP oracle: piecewise-constant initial and boundary
// data; entropy solution built from exact Rankine-Hugoniot fronts with
// rarefactions resolved at `fan_resolution`.
class ExactScalar {
 public:
  ExactScalar(PiecewiseProfile u0, DatumSchedule ub, double fan_resolution = 1e-5);

  double eval(double t, double x) const;
  // the full profile at time t (piecewise constant)
  PiecewiseProfile profile(double t) const;

 private:
  PiecewiseProfile u0_;
  DatumSchedule ub_;
  double res_;
};

double exact_scalar(const PiecewiseProfile& u0, const DatumSchedule& ub, double t, double x);

// Exact L1 distance of two piecewise-constant profiles on [a, b].
double l1_distance(const PiecewiseProfile& a, const PiecewiseProfile& b, double lo, double hi);

PiecewiseProfile profile_from_snapshot(const ProfileSnapshot& snap);

// ---------------------------------------------------------------------------
// Interaction-estimate measurement.

enum class EstimateId { nc, me, melindeg, rarepiccola, pallido2, iebressan };

inline const char* to_string(EstimateId id) {
  switch (id) {
    case EstimateId::nc: return "nc";
    case EstimateId::me: return "me";
    case EstimateId::melindeg: return "melindeg";
    case EstimateId::rarepiccola: return "rarepiccola";
    case EstimateId::pallido2: return "pallido2";
    case EstimateId::iebressan: return "iebressan";
  }
  return "?";
}

struct SweepSpec {
  int samples = 1000;
  double max_strength = 0.1;
  double max_xi = 0.05;
  std::uint64_t seed = 2024;
  bool zero_rhs_slice = false;  // restrict to xi_k = 0, varsigma >= 0 samples
};

struct EstimateReport {
  EstimateId estimate_id;
  int sample_count = 0;
  int applicable = 0;   // samples where the estimate's premise held
  int failures = 0;     // solver failures, excluded from the sup
  double sup_ratio = 0;
  double sup_lhs_zero_rhs = 0;  // sup LHS over samples with exactly zero RHS
  double tail_ratio = 0;        // sup over the smallest-strength third
  SweepSpec sweep;
};

EstimateReport measure_estimate(const SystemSpec& sys, const BoundaryLayerModel& model,
                                EstimateId id, const SweepSpec& sweep, bool parallel = true);

// Serial reference of the same sweep (kept for testing the parallel kernel).
EstimateReport measure_estimate_serial(const SystemSpec& sys, const BoundaryLayerModel& model,
                                       EstimateId id, const SweepSpec& sweep);

// ---------------------------------------------------------------------------
// Boundary-condition verification by layer shooting.

struct BoundaryConditionSample {
  double t = 0;
  double beta_residual = 0;
  double rh_residual = 0;      // |f(v(u_bar)) - f(v(u_under))| when reconstructed
  bool reconstructed = false;  // u_under != u_bar
  bool flagged = false;        // ambiguous reconstruction; best of both reported
  bool ok = false;
};

struct BoundaryConditionReport {
  std::vector<BoundaryConditionSample> samples;
  int admissible = 0;  // samples away from boundary-event clusters
  int passing = 0;
  double pass_fraction = 0;
  double max_rh_residual = 0;
};

BoundaryConditionReport verify_boundary_condition(const SystemSpec& sys,
                                                  const BoundaryLayerModel& model,
                                                  const Trajectory& traj,
                                                  const DatumSchedule& datum,
                                                  const std::vector<double>& sample_times,
                                                  double eps, double tol = 1e-6);

// ---------------------------------------------------------------------------
// Epsilon-convergence study.

struct ConvergenceRow {
  double eps;
  double l1_to_next = 0;      // |u_eps - u_{next eps}|_{L1} at t_end
  double l1_to_exact = 0;     // scalar systems only
  double sup_tv = 0;
  double flux_trace_tv = 0;
  std::int64_t event_count = 0;
  double max_raref = 0;
  double np_total = 0;
};

std::vector<ConvergenceRow> convergence_study(const SystemSpec& sys,
                                              const BoundaryLayerModel& model, RunConfig cfg,
                                              const std::vector<double>& eps_list,
                                              bool parallel = true);

int thread_count();

}  // namespace fronttrack

#endif
