#include "fronttrack/functionals.hpp"

#include <cmath>

namespace fronttrack {

double theta_weight(const Front& f, int k, double A_weight) {
  if (f.kind == FrontKind::NonPhysical) return f.s;  // s already holds |u+ - u-|
  return f.family < k ? A_weight * f.s : f.s;
}

bool approaching(const Front& a, const Front& b, int k, const std::vector<FieldKind>& kinds) {
  const int N = static_cast<int>(kinds.size());
  int ia = a.kind == FrontKind::NonPhysical ? N + 1 : a.family;
  int ib = b.kind == FrontKind::NonPhysical ? N + 1 : b.family;
  if (ia == k && ib == k) return true;  // k-fronts always approach
  if (ia > ib) return true;
  if (ia < ib) return false;
  if (ia == N + 1) return false;  // two non-physical fronts
  if (kinds[ia - 1] == FieldKind::LinearlyDegenerate) return false;
  return a.kind == FrontKind::Shock || b.kind == FrontKind::Shock;
}

FunctionalSnapshot compute_functionals(const SystemSpec& sys, const BoundaryLayerModel& model,
                                       const FunctionalInput& in, const FunctionalConstants& c) {
  FunctionalSnapshot s;
  s.t = in.t;
  const int k = model.k;
  const auto& fronts = *in.fronts;
  s.xi_k_abs = std::abs(in.trace->xi_k);

  s.V = s.xi_k_abs;
  for (const Front& f : fronts) {
    if (f.retired) continue;
    s.V += std::abs(theta_weight(f, k, c.A_weight));
  }

  for (std::size_t i = 0; i < fronts.size(); ++i) {
    if (fronts[i].retired) continue;
    for (std::size_t j = i + 1; j < fronts.size(); ++j) {
      if (fronts[j].retired) continue;
      if (approaching(fronts[i], fronts[j], k, sys.field_kinds))
        s.Q += std::abs(theta_weight(fronts[i], k, c.A_weight) *
                        theta_weight(fronts[j], k, c.A_weight));
    }
  }

  for (const Front& f : fronts) {
    if (f.retired) continue;
    int fam = f.kind == FrontKind::NonPhysical ? sys.N + 1 : f.family;
    if (fam <= k) s.R += s.xi_k_abs * std::abs(theta_weight(f, k, c.A_weight));
  }

  if (model.characteristic) {
    // varsigma_cache holds varsigma_k(u_alpha, s_alpha) for GNL k and
    // lambda_k(u_alpha) for LD k, set when the front was created.
    for (const Front& f : fronts) {
      if (f.retired || f.kind == FrontKind::NonPhysical || f.family != k) continue;
      s.S += std::abs(f.s) * std::max(0.0, -f.varsigma_cache);
    }
  }

  s.Z = in.datum->remaining_tv(in.t, in.before_event);
  s.Upsilon = s.V + c.K1 * s.Q + c.K1 * s.R + c.K2 * s.S + c.K3 * s.Z;
  s.F = in.flux_trace_tv;
  s.Lambda = s.F + c.K4 * s.Upsilon;
  return s;
}

Verdict check_event_decrease(const FunctionalSnapshot& before, const FunctionalSnapshot& after,
                             const EventRecord& ev, double slack) {
  Verdict v;
  v.event = ev;
  v.delta_upsilon = after.Upsilon - before.Upsilon;
  v.delta_lambda = after.Lambda - before.Lambda;
  const double tiny = 1e-12 * (1.0 + before.Upsilon);

  double required = 0.0;
  switch (ev.kind) {
    case EventKind::InteriorAccurate:
    case EventKind::InteriorSimplified:
    case EventKind::InteriorNonPhysical:
      required = std::abs(ev.s_a * ev.s_b);
      break;
    case EventKind::BoundaryHitBelowK:
      required = std::abs(ev.s_hit);
      break;
    case EventKind::BoundaryHitK:
      // quantified decrease only for the accurate solver; the simplified one
      // guarantees plain monotonicity
      required = ev.accurate
                     ? std::abs(ev.s_hit) * (ev.varsigma_minus + std::abs(ev.xi_k_before))
                     : 0.0;
      break;
    case EventKind::DatumJump:
      required = ev.datum_jump;
      break;
    case EventKind::Retire:
      required = 0.0;
      break;
  }
  v.bound = -required / slack;
  v.pass = v.delta_upsilon <= v.bound + tiny;
  v.lambda_pass = v.delta_lambda <= tiny;
  return v;
}

}  // namespace fronttrack
