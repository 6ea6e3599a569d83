#include <cmath>

#include "fronttrack/numerics.hpp"
#include "fronttrack/verify.hpp"

namespace fronttrack {

namespace {

struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(splitmix64(seed)) {}
  double uniform() {
    s = splitmix64(s);
    return (static_cast<double>(s >> 11) + 0.5) / 9007199254740992.0;
  }
  double sym(double amp) { return amp * (2.0 * uniform() - 1.0); }
};

Vec random_state(const SystemSpec& sys, Rng& rng, double frac = 0.3) {
  Vec u = sys.u_star;
  for (int d = 0; d < sys.N; ++d) u[d] += rng.sym(frac * sys.box_halfwidth);
  return u;
}

// Lipschitz constant of the wave fan curves and of the flux along them.
void curve_constants(const SystemSpec& sys, const BoundaryLayerModel& model,
                     const CalibrationOptions& o, double& C7, double& C4, double& lipF) {
  Rng rng(o.seed ^ 0x77);
  C7 = 1.0;
  C4 = 0.0;
  lipF = 1.0;
  for (int n = 0; n < o.samples; ++n) {
    try {
      Vec u = random_state(sys, rng);
      int fam = 1 + static_cast<int>(rng.uniform() * sys.N);
      fam = std::min(fam, sys.N);
      double s = rng.sym(o.max_strength);
      if (std::abs(s) < 1e-4) continue;
      Vec w = wave_fan_curve(sys, fam, u, s).state;
      C7 = std::max(C7, (w - u).norm() / std::abs(s));
      Vec df = sys.flux(sys.v_of_u(w)) - sys.flux(sys.v_of_u(u));
      lipF = std::max(lipF, df.norm() / std::abs(s));
      if (model.characteristic && fam == model.k) {
        double vs = model.ld ? lambda_of(sys, model.k, u) : varsigma(sys, model.k, u, s);
        double scale = (u - sys.u_star).cwiseAbs().maxCoeff() + std::abs(s);
        if (scale > 1e-8) C4 = std::max(C4, std::abs(vs) / scale);
      }
    } catch (const FtError&) {
    }
  }
}

// (e:dadim3): drift of varsigma_k across an interior interaction.
double measure_C3(const SystemSpec& sys, const BoundaryLayerModel& model,
                  const CalibrationOptions& o) {
  if (!model.characteristic || model.ld) return 0.0;
  Rng rng(o.seed ^ 0x33);
  const int k = model.k;
  double C3 = 0.0;
  for (int n = 0; n < o.samples; ++n) {
    try {
      Vec u_r = random_state(sys, rng);
      int fam_b = 1 + static_cast<int>(rng.uniform() * sys.N);
      fam_b = std::min(fam_b, sys.N);
      if (fam_b == k) continue;
      double s_b = rng.sym(o.max_strength);
      double s_a = rng.sym(o.max_strength);
      if (std::abs(s_a) < 1e-4 || std::abs(s_b) < 1e-4) continue;
      Vec u_l, u_m;
      Vec u_alpha;  // right state of the k-front before the interaction
      if (k > fam_b) {
        // k-front on the left catches the slower beta-front
        u_m = wave_fan_curve(sys, fam_b, u_r, s_b).state;
        u_l = wave_fan_curve(sys, k, u_m, s_a).state;
        u_alpha = u_m;
      } else {
        u_m = wave_fan_curve(sys, k, u_r, s_a).state;
        u_l = wave_fan_curve(sys, fam_b, u_m, s_b).state;
        u_alpha = u_r;
      }
      WaveFan fan = solve_riemann(sys, u_l, u_r);
      double before = varsigma(sys, k, u_alpha, s_a);
      double after = varsigma(sys, k, fan.intermediate_states[k], fan.strengths[k - 1]);
      C3 = std::max(C3, std::abs(after - before) / std::abs(s_b));
    } catch (const FtError&) {
    }
  }
  return C3;
}

// datum-jump constants (e:jd1) and (e:pallido).
void measure_datum_constants(const SystemSpec& sys, const BoundaryLayerModel& model,
                             const CalibrationOptions& o, double& C6, double& C11) {
  Rng rng(o.seed ^ 0x66);
  C6 = 0.0;
  C11 = 0.0;
  const int k = model.k;
  for (int n = 0; n < o.samples; ++n) {
    try {
      Vec u_bar = random_state(sys, rng);
      Vec xi(model.n_stable);
      for (int i = 0; i < model.n_stable; ++i) xi[i] = rng.sym(o.max_xi);
      double xi_k = 0.0;
      if (model.characteristic) {
        double lam = lambda_of(sys, k, u_bar);
        if (lam <= 0) {
          double hi = model.ld ? o.max_xi : std::min(underline_s(sys, k, u_bar), o.max_xi);
          xi_k = -o.max_xi + rng.uniform() * (hi + o.max_xi);
        }
      }
      Vec u_bm = phi(sys, model, u_bar, xi, xi_k);
      Vec jump(sys.N);
      for (int d = 0; d < sys.N; ++d) jump[d] = rng.sym(0.5 * o.max_strength);
      if (jump.norm() < 1e-5) continue;
      Vec u_bp = u_bm + jump;
      BRSolution warm;
      warm.xi = xi;
      warm.s_k = xi_k;
      warm.s_upper = Vec::Zero(model.characteristic ? sys.N - k : sys.N - k + 1);
      BRSolution sol = solve_boundary_riemann(sys, model, u_bar, u_bp, &warm);
      double lhs = 0;
      for (int i = 0; i < model.n_stable; ++i) lhs += std::abs(xi[i] - sol.xi[i]);
      lhs += std::abs(sol.s_k - xi_k);
      for (int i = 0; i < sol.s_upper.size(); ++i) lhs += std::abs(sol.s_upper[i]);
      C6 = std::max(C6, lhs / jump.norm());
      if (model.characteristic && !model.ld) {
        double lam_hat = lambda_of(sys, k, sol.u_hat);
        double sb = bar_s(sys, k, sol.u_hat);
        if (lam_hat >= 0 && sol.s_k < sb)
          C11 = std::max(C11, std::abs(sb) / jump.norm());
      }
    } catch (const FtError&) {
    }
  }
}

}  // namespace

FunctionalConstants calibrate(const SystemSpec& sys, const BoundaryLayerModel& model,
                              const CalibrationOptions& o) {
  FunctionalConstants c;
  SweepSpec sw;
  sw.samples = o.samples;
  sw.max_strength = o.max_strength;
  sw.max_xi = o.max_xi;
  sw.seed = o.seed;

  double C1 = 0, C2 = 0, C5 = 0, C8 = 0, C10 = 0, C12 = 0;
  if (model.k > 1) C1 = measure_estimate(sys, model, EstimateId::nc, sw).sup_ratio;
  if (model.characteristic && !model.ld) {
    C2 = measure_estimate(sys, model, EstimateId::me, sw).sup_ratio;
    C8 = measure_estimate(sys, model, EstimateId::rarepiccola, sw).sup_ratio;
    C12 = measure_estimate(sys, model, EstimateId::pallido2, sw).sup_ratio;
  }
  if (model.characteristic && model.ld)
    C10 = measure_estimate(sys, model, EstimateId::melindeg, sw).sup_ratio;
  C5 = measure_estimate(sys, model, EstimateId::iebressan, sw).sup_ratio;

  double C7, C4, lipF;
  curve_constants(sys, model, o, C7, C4, lipF);
  double C3 = measure_C3(sys, model, o);
  double C6, C11;
  measure_datum_constants(sys, model, o, C6, C11);
  double C2eff = std::max(C2, C10);  // the LD estimate plays the role of C2

  const double m = o.margin;
  c.A_weight = m * (std::max(2.0 * C7, C1 + 1.0) + 1.0);
  c.K2 = m * (2.0 * C7 * C2eff + 1.0);
  c.K1 = m * std::max(2.0 * (C2eff * C7 + 1.0),
                      2.0 * c.A_weight * C5 + 2.0 + 2.0 * c.K2 * (1.0 + 2.0 * C3));
  c.K1 = std::max(c.K1, c.K2 + 1.0);
  c.K3 = m * (C6 + 2.0);
  c.K4 = m * (lipF * (2.0 + C1 + C6) + 1.0);
  c.K5 = std::max(1.0, 4.0 * C5);

  double C14 = std::max(1.0, C7);
  auto min_pos = [](double a, double b) { return std::min(a, b); };
  double delta = 1.0 / c.K1;
  if (C1 + C12 + C1 * C12 > 0) delta = min_pos(delta, 1.0 / (c.K1 * (C1 + C12 + C1 * C12)));
  if (C7 * C2eff > 0) delta = min_pos(delta, 0.5 / (C7 * C2eff));
  if (C4 * C5 > 0) delta = min_pos(delta, 1.0 / (C4 * C5));
  if (c.A_weight * C5 > 0) delta = min_pos(delta, 0.125 / (c.A_weight * C5));
  if (2.0 * C6 + (1.0 + C6) * C11 > 0)
    delta = min_pos(delta, 1.0 / (c.K1 * (2.0 * C6 + (1.0 + C6) * C11)));
  if (C2eff > 0) delta = min_pos(delta, std::min(1.0 / C2eff, 1.0 / (C2eff * (1.0 + C4))));
  if (C8 > 0) delta = min_pos(delta, 0.5 / C8);
  delta = min_pos(delta, 0.5 / c.K5);
  c.delta = delta;
  c.delta_star = delta / C14;
  c.chain_ok = true;

  c.measured_C = {{"C1", C1},   {"C2", C2},   {"C3", C3},  {"C4", C4},  {"C5", C5},
                  {"C6", C6},   {"C7", C7},   {"C8", C8},  {"C10", C10}, {"C11", C11},
                  {"C12", C12}, {"C14", C14}, {"lipF", lipF}};
  return c;
}

}  // namespace fronttrack
