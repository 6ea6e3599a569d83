#ifndef FRONTTRACK_TRACKER_HPP
#define FRONTTRACK_TRACKER_HPP

#include <map>

#include "fronttrack/boundary.hpp"
#include "fronttrack/functionals.hpp"
#include "fronttrack/riemann.hpp"

namespace fronttrack {

struct EpsilonParams {
  double eps = 1e-2;
  double r_eps = 1e-2;        // rarefaction splitting threshold
  double omega_eps = 1e-4;    // accurate/simplified threshold
  double lambda_hat = 0;      // speed of non-physical fronts; 0 = auto
};

// Piecewise-constant profile on [0, +inf[: values[i] on ]breaks[i-1], breaks[i][,
// values.back() beyond the last break.
struct PiecewiseProfile {
  std::vector<double> breaks;
  std::vector<Vec> values;

  const Vec& at(double x) const {
    std::size_t i = 0;
    while (i < breaks.size() && x >= breaks[i]) ++i;
    return values[i];
  }
  double total_variation() const {
    double tv = 0;
    for (std::size_t i = 1; i < values.size(); ++i) tv += (values[i] - values[i - 1]).norm();
    return tv;
  }
};

struct ApproxData {
  PiecewiseProfile u0;
  DatumSchedule ub;
  int u0_jumps = 0;
  int ub_jumps = 0;
};

// L1-coarsening of piecewise-constant data within budget eps per component
// function; never increases the total variation and keeps the values at 0.
ApproxData approximate_data(const PiecewiseProfile& u0, const DatumSchedule& ub, double eps,
                            double x_max, double t_max);

struct SimulationState {
  double time = 0;
  std::vector<Front> fronts;  // active, ordered by position
  BoundaryTraceState trace;
  DatumSchedule datum;
  EpsilonParams params;
  double flux_trace_tv = 0;
  std::int64_t next_id = 1;
  std::vector<Front> retired;

  double total_variation(double x_max = 1e300) const;
};

// Piecewise-constant evaluation; right limit at front positions, trace.u_bar
// at x = 0.
std::vector<Vec> sample(const SimulationState& state, const std::vector<double>& xs);

struct EventCandidate {
  enum Type { None, Collision, BoundaryHit, DatumJump, Finish } type = None;
  double t = 0;
  std::size_t index = 0;  // left front index for collisions
};

EventCandidate next_event(const SimulationState& state, double t_end);

struct ProfileSnapshot {
  double t;
  std::vector<double> xs;   // front positions
  std::vector<Vec> states;  // states.size() = xs.size() + 1, left to right
  double tot_var;
};

struct Violation {
  double t;
  std::string what;
};

// Life of one front in the x-t plane, for diagrams and logs.
struct FrontSegment {
  std::int64_t id;
  int family;
  FrontKind kind;
  double s;
  int generation;
  double t0, x0, t1, x1;
};

struct Trajectory {
  std::vector<Verdict> events;
  std::vector<FunctionalSnapshot> series;  // after each event (plus t = 0)
  std::vector<std::pair<double, BoundaryTraceState>> trace_history;
  std::vector<ProfileSnapshot> snapshots;
  std::vector<FrontSegment> segments;
  std::vector<Violation> violations;
  double max_raref_strength = 0;
  double max_np_strength_total = 0;
  double sup_tv = 0;
  double upsilon0 = 0;
  std::map<std::string, std::int64_t> counters;
  SimulationState final_state;
  bool all_pass = true;
};

struct RunConfig {
  PiecewiseProfile u0;
  DatumSchedule ub;
  EpsilonParams params;
  FunctionalConstants constants;
  double t_end = 1.0;
  double x_max = 10.0;
  std::vector<double> snapshot_times;
  std::uint64_t seed = 1;
  double slack = 1.05;
  std::int64_t event_cap = 1000000;
  bool approximate = true;         // run approximate_data first
  bool enforce_data_budget = false;  // DataTooLarge when Upsilon(0) > delta
};

// Auto lambda_hat: 1.05 * sup |lambda_i| over the working box.
double auto_lambda_hat(const SystemSpec& sys);

Trajectory run(const SystemSpec& sys, const BoundaryLayerModel& model, const RunConfig& cfg);

}  // namespace fronttrack

#endif
