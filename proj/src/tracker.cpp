#include "fronttrack/tracker.hpp"

#include <algorithm>
#include <cmath>

#include "fronttrack/numerics.hpp"

namespace fronttrack {

namespace {
constexpr double kTimeTol = 1e-13;
}

double auto_lambda_hat(const SystemSpec& sys) {
  double m = 0.0;
  // corners and center of the working box
  const int N = sys.N;
  std::vector<Vec> pts{sys.u_star};
  for (int mask = 0; mask < (1 << N); ++mask) {
    Vec u = sys.u_star;
    for (int d = 0; d < N; ++d) u[d] += (mask & (1 << d)) ? sys.box_halfwidth : -sys.box_halfwidth;
    pts.push_back(u);
  }
  for (const Vec& u : pts) {
    EigenData d = eigen_raw(sys, u);
    m = std::max(m, d.lambdas.cwiseAbs().maxCoeff());
  }
  return 1.05 * m;
}

namespace {

// merge contiguous pieces while the per-piece L1 error stays within budget;
// replacement values are length-weighted means, so TV never grows and the
// first piece keeps the value at 0.
PiecewiseProfile coarsen(const PiecewiseProfile& in, double eps, double x_max) {
  if (in.values.size() <= 1) return in;
  // data that is already piecewise constant with a modest number of jumps
  // satisfies the approximation requirements as-is
  std::size_t budget_pieces =
      std::max<std::size_t>(64, (std::size_t)std::ceil(in.total_variation() / eps) + 1);
  if (in.values.size() <= budget_pieces) return in;
  std::vector<double> lo, hi;
  double prev = 0.0;
  for (std::size_t i = 0; i < in.values.size(); ++i) {
    lo.push_back(prev);
    double end = (i < in.breaks.size()) ? in.breaks[i] : x_max;
    hi.push_back(std::max(end, prev));
    prev = hi.back();
  }
  PiecewiseProfile out;
  double budget = eps;
  std::size_t i = 0;
  while (i < in.values.size()) {
    Vec acc = in.values[i] * (hi[i] - lo[i]);
    double len = hi[i] - lo[i];
    std::size_t j = i;
    while (j + 1 < in.values.size()) {
      double nl = len + (hi[j + 1] - lo[j + 1]);
      Vec mean = (i == 0) ? in.values[0]
                          : Vec((acc + in.values[j + 1] * (hi[j + 1] - lo[j + 1])) /
                                std::max(nl, 1e-300));
      double err = 0.0;
      for (std::size_t q = i; q <= j + 1; ++q)
        err += (in.values[q] - mean).norm() * (hi[q] - lo[q]);
      if (err > budget || nl <= 0) break;
      acc += in.values[j + 1] * (hi[j + 1] - lo[j + 1]);
      len = nl;
      ++j;
    }
    Vec mean = len > 0 ? Vec(acc / len) : in.values[i];
    if (i == 0) mean = in.values[0];  // keep the value at 0 exactly
    double err = 0.0;
    for (std::size_t q = i; q <= j; ++q) err += (in.values[q] - mean).norm() * (hi[q] - lo[q]);
    budget = std::max(0.0, budget - err);
    out.values.push_back(mean);
    if (j + 1 < in.values.size()) out.breaks.push_back(hi[j]);
    i = j + 1;
  }
  // drop vanishing jumps
  PiecewiseProfile clean;
  clean.values.push_back(out.values[0]);
  for (std::size_t q = 1; q < out.values.size(); ++q) {
    if ((out.values[q] - clean.values.back()).norm() < 1e-14) continue;
    clean.values.push_back(out.values[q]);
    clean.breaks.push_back(out.breaks[q - 1]);
  }
  return clean;
}

}  // namespace

ApproxData approximate_data(const PiecewiseProfile& u0, const DatumSchedule& ub, double eps,
                            double x_max, double t_max) {
  ApproxData out;
  out.u0 = coarsen(u0, eps, x_max);
  PiecewiseProfile ubp;
  ubp.values = ub.values;
  for (std::size_t i = 1; i < ub.times.size(); ++i) ubp.breaks.push_back(ub.times[i]);
  PiecewiseProfile ubc = coarsen(ubp, eps, t_max);
  out.ub.values = ubc.values;
  out.ub.times = {0.0};
  for (double b : ubc.breaks) out.ub.times.push_back(b);
  out.u0_jumps = static_cast<int>(out.u0.breaks.size());
  out.ub_jumps = static_cast<int>(out.ub.times.size()) - 1;
  return out;
}

double SimulationState::total_variation(double x_max) const {
  double tv = 0.0;
  for (const Front& f : fronts) {
    if (f.retired) continue;
    if (f.position(time) > x_max) continue;
    tv += (f.right_state - f.left_state).norm();
  }
  return tv;
}

std::vector<Vec> sample(const SimulationState& state, const std::vector<double>& xs) {
  std::vector<Vec> out;
  out.reserve(xs.size());
  for (double x : xs) {
    Vec v = state.trace.u_bar;
    for (const Front& f : state.fronts) {
      if (f.retired) continue;
      if (f.position(state.time) <= x) v = f.right_state;
      else break;
    }
    out.push_back(v);
  }
  return out;
}

EventCandidate next_event(const SimulationState& state, double t_end) {
  EventCandidate best;
  best.type = EventCandidate::Finish;
  best.t = t_end;
  const double t = state.time;
  const auto& fr = state.fronts;

  // leftmost front hitting the boundary
  if (!fr.empty() && fr.front().speed < 0) {
    double th = t - fr.front().position(t) / fr.front().speed;
    if (th < best.t) {
      best.type = EventCandidate::BoundaryHit;
      best.t = th;
      best.index = 0;
    }
  }
  // adjacent collisions
  for (std::size_t i = 0; i + 1 < fr.size(); ++i) {
    double dv = fr[i].speed - fr[i + 1].speed;
    if (dv <= 1e-16) continue;
    double gap = fr[i + 1].position(t) - fr[i].position(t);
    double tc = t + std::max(gap, 0.0) / dv;
    if (tc < best.t) {
      best.type = EventCandidate::Collision;
      best.t = tc;
      best.index = i;
    }
  }
  // next datum jump
  for (std::size_t i = 1; i < state.datum.times.size(); ++i) {
    if (state.datum.times[i] > t + 1e-15 && state.datum.times[i] < best.t - kTimeTol) {
      best.type = EventCandidate::DatumJump;
      best.t = state.datum.times[i];
      best.index = i;
      break;
    }
    if (state.datum.times[i] >= best.t - kTimeTol) break;
  }
  if (best.type == EventCandidate::Finish && best.t >= t_end) best.t = t_end;
  return best;
}

namespace {

class Engine {
 public:
  Engine(const SystemSpec& sys, const BoundaryLayerModel& model, const RunConfig& cfg)
      : sys_(sys), model_(model), cfg_(cfg) {}

  Trajectory go() {
    setup();
    loop();
    finish();
    traj_.final_state = state_;
    return std::move(traj_);
  }

 private:
  const SystemSpec& sys_;
  const BoundaryLayerModel& model_;
  RunConfig cfg_;
  SimulationState state_;
  Trajectory traj_;
  std::size_t snap_idx_ = 0;

  double jitter_for(std::int64_t id) const {
    double u = hash_unit(cfg_.seed, static_cast<std::uint64_t>(id));
    double mag = 1e-12 * u;
    bool neg = splitmix64(cfg_.seed ^ (0x5bd1e995ULL * static_cast<std::uint64_t>(id))) & 1;
    return neg ? -mag : mag;
  }

  Front make_front(const ProtoFront& p, int generation, double t, double x) {
    Front f;
    f.id = state_.next_id++;
    f.family = p.family;
    f.kind = p.kind;
    f.s = p.s;
    f.left_state = p.left_state;
    f.right_state = p.right_state;
    f.generation = generation;
    f.birth_time = t;
    f.t_ref = t;
    f.x_ref = x;
    f.speed = p.speed;
    if (!p.no_jitter) {
      double j = jitter_for(f.id);
      double lo = p.lax_lo + 1e-13, hi = p.lax_hi - 1e-13;
      double sp = f.speed + j;
      if (lo < hi) sp = std::min(std::max(sp, lo), hi);
      if (p.keep_sign_nonneg && sp < 0) sp = std::abs(j);
      f.speed = sp;
    }
    if (p.kind == FrontKind::Rarefaction)
      traj_.max_raref_strength = std::max(traj_.max_raref_strength, std::abs(p.s));
    if (f.family == model_.k && model_.characteristic && f.kind != FrontKind::NonPhysical) {
      f.varsigma_cache = model_.ld ? lambda_of(sys_, model_.k, f.right_state)
                                   : varsigma(sys_, model_.k, f.right_state, f.s);
      // (incidono): a k-front moving toward the boundary carries negative
      // characteristic content
      if (f.speed < 0 && f.varsigma_cache >= 0)
        violation("incidono violated by front " + std::to_string(f.id));
    }
    return f;
  }

  void violation(const std::string& what) {
    traj_.violations.push_back({state_.time, what});
    traj_.all_pass = false;
  }

  void close_segment(const Front& f, double t_end_seg) {
    traj_.segments.push_back({f.id, f.family, f.kind, f.s, f.generation, f.birth_time, f.x_ref,
                              t_end_seg, f.position(t_end_seg)});
  }

  FunctionalSnapshot snapshot_functionals(bool before) {
    FunctionalInput in;
    in.t = state_.time;
    in.fronts = &state_.fronts;
    in.trace = &state_.trace;
    in.datum = &state_.datum;
    in.flux_trace_tv = state_.flux_trace_tv;
    in.before_event = before;
    return compute_functionals(sys_, model_, in, cfg_.constants);
  }

  void accumulate_flux_trace(const Vec& ubar_before, const Vec& ubar_after) {
    Vec fb = sys_.flux(sys_.v_of_u(ubar_before));
    Vec fa = sys_.flux(sys_.v_of_u(ubar_after));
    state_.flux_trace_tv += (fa - fb).norm();
  }

  void check_chaining() {
    const auto& fr = state_.fronts;
    if (!fr.empty() && (fr.front().left_state - state_.trace.u_bar).norm() > 1e-8)
      violation("leftmost state does not chain to the trace");
    for (std::size_t i = 0; i + 1 < fr.size(); ++i)
      if ((fr[i].right_state - fr[i + 1].left_state).norm() > 1e-8)
        violation("state chaining broken at front " + std::to_string(fr[i].id));
    double tvp = trace_property_violation(sys_, model_, state_.trace);
    if (tvp > 1e-8) violation("trace property violated by " + std::to_string(tvp));
  }

  void insert_emission(const FrontEmission& em, const std::vector<int>& gens, double t, double x,
                       std::size_t pos) {
    std::vector<Front> created;
    for (std::size_t q = 0; q < em.fronts.size(); ++q)
      created.push_back(make_front(em.fronts[q], gens[q], t, x));
    state_.fronts.insert(state_.fronts.begin() + pos, created.begin(), created.end());
  }

  void retire_escaped() {
    double t = state_.time;
    auto& fr = state_.fronts;
    std::size_t before = fr.size();
    for (auto it = fr.begin(); it != fr.end();) {
      if (it->position(t) > cfg_.x_max) {
        Front f = *it;
        f.retired = true;
        close_segment(f, t);
        state_.retired.push_back(f);
        it = fr.erase(it);
      } else {
        ++it;
      }
    }
    if (fr.size() != before) {
      FunctionalSnapshot after = snapshot_functionals(false);
      EventRecord ev;
      ev.kind = EventKind::Retire;
      ev.t = t;
      Verdict v = check_event_decrease(traj_.series.back(), after, ev, cfg_.slack);
      push_verdict(v, after);
    }
  }

  void push_verdict(const Verdict& v, const FunctionalSnapshot& after) {
    traj_.events.push_back(v);
    traj_.series.push_back(after);
    traj_.counters["events_" + std::string(to_string(v.event.kind))]++;
    if (!v.pass || !v.lambda_pass) {
      traj_.all_pass = false;
      traj_.counters["failed_verdicts"]++;
    }
    double np = 0;
    for (const Front& f : state_.fronts)
      if (f.kind == FrontKind::NonPhysical) np += f.s;
    traj_.max_np_strength_total = std::max(traj_.max_np_strength_total, np);
    traj_.sup_tv = std::max(traj_.sup_tv, state_.total_variation(cfg_.x_max));
  }

  void take_snapshot(double t) {
    ProfileSnapshot snap;
    snap.t = t;
    snap.states.push_back(state_.trace.u_bar);
    for (const Front& f : state_.fronts) {
      snap.xs.push_back(f.position(t));
      snap.states.push_back(f.right_state);
    }
    snap.tot_var = 0.0;
    for (std::size_t i = 0; i < snap.xs.size(); ++i)
      if (snap.xs[i] <= cfg_.x_max)
        snap.tot_var += (snap.states[i + 1] - snap.states[i]).norm();
    traj_.sup_tv = std::max(traj_.sup_tv, snap.tot_var);
    traj_.snapshots.push_back(std::move(snap));
  }

  void process_snapshots_until(double t_next) {
    while (snap_idx_ < cfg_.snapshot_times.size() &&
           cfg_.snapshot_times[snap_idx_] <= t_next + 1e-15) {
      take_snapshot(cfg_.snapshot_times[snap_idx_]);
      ++snap_idx_;
    }
  }

  BRSolution solve_boundary(const Vec& u_plus, const Vec& u_b, double warm_sk) {
    BRSolution warm;
    warm.xi = state_.trace.xi;
    warm.s_k = warm_sk;
    warm.s_upper = Vec::Zero(model_.characteristic ? sys_.N - model_.k : sys_.N - model_.k + 1);
    return solve_boundary_riemann(sys_, model_, u_plus, u_b, &warm);
  }

  void setup() {
    state_.params = cfg_.params;
    if (state_.params.lambda_hat <= 0) state_.params.lambda_hat = auto_lambda_hat(sys_);
    if (cfg_.approximate) {
      ApproxData ad = approximate_data(cfg_.u0, cfg_.ub, cfg_.params.eps, cfg_.x_max, cfg_.t_end);
      cfg_.u0 = ad.u0;
      cfg_.ub = ad.ub;
    }
    state_.datum = cfg_.ub;
    state_.time = 0;

    // boundary Riemann problem at the origin
    Vec u0_left = cfg_.u0.values.front();
    BRSolution sol = solve_boundary(u0_left, state_.datum.values.front(), 0.0);
    state_.trace = sol.trace;
    FrontEmission em0 = accurate_boundary_fronts(sys_, model_, sol, state_.params.r_eps);
    std::vector<int> gens(em0.fronts.size(), 1);
    insert_emission(em0, gens, 0.0, 0.0, 0);

    // interior Riemann problems at the data jumps
    for (std::size_t j = 0; j < cfg_.u0.breaks.size(); ++j) {
      WaveFan fan = solve_riemann(sys_, cfg_.u0.values[j], cfg_.u0.values[j + 1]);
      fan.intermediate_states[0] = cfg_.u0.values[j];
      FrontEmission em = accurate_fronts(sys_, model_.k, fan, state_.params.r_eps);
      std::vector<int> g(em.fronts.size(), 1);
      insert_emission(em, g, 0.0, cfg_.u0.breaks[j], state_.fronts.size());
    }
    check_chaining();
    FunctionalSnapshot s0 = snapshot_functionals(false);
    traj_.series.push_back(s0);
    traj_.upsilon0 = s0.Upsilon;
    traj_.trace_history.emplace_back(0.0, state_.trace);
    if (cfg_.enforce_data_budget && s0.Upsilon > cfg_.constants.delta)
      throw FtError(ErrCode::DataTooLarge,
                    "Upsilon(0) = " + std::to_string(s0.Upsilon) + " exceeds delta = " +
                        std::to_string(cfg_.constants.delta));
  }

  void resolve_collision(std::size_t i, double t_e) {
    Front L = state_.fronts[i];
    Front R = state_.fronts[i + 1];
    double x_e = 0.5 * (L.position(t_e) + R.position(t_e));
    x_e = std::max(x_e, 0.0);

    bool has_np = L.kind == FrontKind::NonPhysical || R.kind == FrontKind::NonPhysical;
    bool accurate = !has_np && std::abs(L.s * R.s) >= state_.params.omega_eps;

    EventRecord ev;
    ev.kind = has_np ? EventKind::InteriorNonPhysical
                     : (accurate ? EventKind::InteriorAccurate : EventKind::InteriorSimplified);
    ev.accurate = accurate;
    ev.t = t_e;
    ev.s_a = L.s;
    ev.s_b = R.s;
    ev.families = {L.family, R.family};

    FunctionalSnapshot before = snapshot_functionals(true);
    std::size_t phys_before = 0;
    for (const Front& f : state_.fronts)
      if (f.kind != FrontKind::NonPhysical) ++phys_before;

    FrontEmission em;
    std::vector<int> gens;
    if (accurate) {
      WaveFan fan = solve_riemann(sys_, L.left_state, R.right_state);
      fan.intermediate_states[0] = L.left_state;
      std::set<int> exempt;
      if (L.kind == FrontKind::Rarefaction) exempt.insert(L.family);
      if (R.kind == FrontKind::Rarefaction) exempt.insert(R.family);
      em = accurate_fronts(sys_, model_.k, fan, state_.params.r_eps, exempt);
      for (const ProtoFront& p : em.fronts) {
        int g;
        if (L.family == R.family && p.family == L.family)
          g = std::min(L.generation, R.generation);
        else if (p.family == L.family)
          g = L.generation;
        else if (p.family == R.family)
          g = R.generation;
        else
          g = std::max(L.generation, R.generation) + 1;
        gens.push_back(g);
      }
    } else {
      em = simplified_fronts(sys_, model_.k, L, R, state_.params.lambda_hat);
      for (const ProtoFront& p : em.fronts) {
        int g;
        if (p.kind == FrontKind::NonPhysical) {
          if (L.kind == FrontKind::NonPhysical) g = L.generation;
          else if (R.kind == FrontKind::NonPhysical) g = R.generation;
          else g = std::max(L.generation, R.generation) + 1;
        } else if (p.family == L.family && L.kind != FrontKind::NonPhysical) {
          g = (L.family == R.family) ? std::min(L.generation, R.generation) : L.generation;
        } else {
          g = R.generation;
        }
        gens.push_back(g);
      }
    }

    state_.time = t_e;
    close_segment(L, t_e);
    close_segment(R, t_e);
    ev.x = x_e;
    state_.fronts.erase(state_.fronts.begin() + i, state_.fronts.begin() + i + 2);
    insert_emission(em, gens, t_e, x_e, i);

    if (!accurate) {
      std::size_t phys_after = 0;
      for (const Front& f : state_.fronts)
        if (f.kind != FrontKind::NonPhysical) ++phys_after;
      if (phys_after > phys_before)
        violation("physical front count grew at a simplified interaction");
    }

    FunctionalSnapshot after = snapshot_functionals(false);
    Verdict v = check_event_decrease(before, after, ev, cfg_.slack);
    push_verdict(v, after);
    check_chaining();
  }

  void resolve_boundary_hit(double t_e) {
    Front f = state_.fronts.front();
    if (f.kind == FrontKind::NonPhysical) {
      violation("non-physical front reached the boundary");
      state_.fronts.erase(state_.fronts.begin());
      return;
    }
    const Vec u_b = state_.datum.at(t_e);
    double xi_k_before = state_.trace.xi_k;

    EventRecord ev;
    ev.t = t_e;
    ev.s_hit = f.s;
    ev.xi_k_before = xi_k_before;
    ev.families = {f.family};

    bool is_k = model_.characteristic && f.family == model_.k;
    bool accurate;
    if (is_k) {
      double vsm = std::max(0.0, -f.varsigma_cache);
      ev.kind = EventKind::BoundaryHitK;
      ev.varsigma_minus = vsm;
      accurate = std::abs(f.s) * (vsm + std::abs(xi_k_before)) >= state_.params.omega_eps;
    } else {
      if (f.family > model_.k) violation("front of a positive family hit the boundary");
      ev.kind = EventKind::BoundaryHitBelowK;
      accurate = std::abs(f.s) >= state_.params.omega_eps;
    }
    ev.accurate = accurate;

    FunctionalSnapshot before = snapshot_functionals(true);
    state_.time = t_e;
    close_segment(f, t_e);
    ev.x = 0.0;
    Vec old_ubar = state_.trace.u_bar;
    state_.fronts.erase(state_.fronts.begin());

    FrontEmission em;
    std::vector<int> gens;
    if (accurate) {
      BRSolution sol = solve_boundary(f.right_state, u_b, xi_k_before + (is_k ? f.s : 0.0));
      em = accurate_boundary_fronts(sys_, model_, sol, state_.params.r_eps, f.family, f.kind);
      state_.trace = sol.trace;
      if (is_k && f.kind == FrontKind::Shock)
        for (const ProtoFront& p : em.fronts)
          if (p.family == model_.k && p.kind == FrontKind::Rarefaction)
            violation("k-shock reflected as a rarefaction");
    } else {
      SimplifiedBoundaryResult res =
          simplified_boundary_fronts(sys_, model_, f, state_.trace, state_.params.lambda_hat,
                                     state_.params.r_eps);
      em = res.emission;
      state_.trace = res.trace;
      if (is_k && f.kind == FrontKind::Shock)
        for (const ProtoFront& p : em.fronts)
          if (p.family == model_.k && p.kind == FrontKind::Rarefaction)
            violation("k-shock reflected as a rarefaction (simplified)");
    }
    state_.trace.u_b = u_b;
    for (const ProtoFront& p : em.fronts)
      gens.push_back(p.family == f.family && p.kind != FrontKind::NonPhysical ? f.generation
                                                                              : f.generation + 1);
    insert_emission(em, gens, t_e, 0.0, 0);
    accumulate_flux_trace(old_ubar, state_.trace.u_bar);

    FunctionalSnapshot after = snapshot_functionals(false);
    Verdict v = check_event_decrease(before, after, ev, cfg_.slack);
    push_verdict(v, after);
    traj_.trace_history.emplace_back(t_e, state_.trace);
    check_chaining();
  }

  void resolve_datum_jump(std::size_t idx, double t_e) {
    Vec ub_old = state_.datum.values[idx - 1];
    Vec ub_new = state_.datum.values[idx];

    EventRecord ev;
    ev.kind = EventKind::DatumJump;
    ev.t = t_e;
    ev.datum_jump = (ub_new - ub_old).norm();

    FunctionalSnapshot before = snapshot_functionals(true);
    state_.time = t_e;
    Vec old_ubar = state_.trace.u_bar;

    BRSolution sol = solve_boundary(state_.trace.u_bar, ub_new, state_.trace.xi_k);
    FrontEmission em = accurate_boundary_fronts(sys_, model_, sol, state_.params.r_eps);
    state_.trace = sol.trace;
    std::vector<int> gens(em.fronts.size(), 1);
    insert_emission(em, gens, t_e, 0.0, 0);
    accumulate_flux_trace(old_ubar, state_.trace.u_bar);

    FunctionalSnapshot after = snapshot_functionals(false);
    Verdict v = check_event_decrease(before, after, ev, cfg_.slack);
    push_verdict(v, after);
    traj_.trace_history.emplace_back(t_e, state_.trace);
    check_chaining();
  }

  void loop() {
    std::int64_t steps = 0;
    while (true) {
      retire_escaped();
      EventCandidate ev = next_event(state_, cfg_.t_end);
      if (ev.type == EventCandidate::Finish || ev.t >= cfg_.t_end) {
        process_snapshots_until(cfg_.t_end);
        state_.time = cfg_.t_end;
        break;
      }
      process_snapshots_until(ev.t);
      if (++steps > cfg_.event_cap)
        throw FtError(ErrCode::EventCapExceeded,
                      "event cap exceeded at t = " + std::to_string(state_.time));
      switch (ev.type) {
        case EventCandidate::Collision: resolve_collision(ev.index, ev.t); break;
        case EventCandidate::BoundaryHit: resolve_boundary_hit(ev.t); break;
        case EventCandidate::DatumJump: resolve_datum_jump(ev.index, ev.t); break;
        default: break;
      }
    }
  }

  void finish() {
    if (cfg_.snapshot_times.empty() ||
        cfg_.snapshot_times.back() < cfg_.t_end - 1e-12)
      take_snapshot(cfg_.t_end);
    for (const Front& f : state_.fronts) close_segment(f, cfg_.t_end);
  }
};

}  // namespace

Trajectory run(const SystemSpec& sys, const BoundaryLayerModel& model, const RunConfig& cfg) {
  Engine e(sys, model, cfg);
  return e.go();
}

}  // namespace fronttrack
