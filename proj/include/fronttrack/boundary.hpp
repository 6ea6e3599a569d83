#ifndef FRONTTRACK_BOUNDARY_HPP
#define FRONTTRACK_BOUNDARY_HPP

#include <optional>

#include "fronttrack/fronts.hpp"
#include "fronttrack/riemann.hpp"
#include "fronttrack/wavecurves.hpp"

namespace fronttrack {

// Leading-order description of the boundary-layer dynamics: the number of
// stable directions of the layer ODE, the uniformly stable basis, and the
// center direction/rate pair (r_c, theta_c) with theta_c = lambda_k / a.
class BoundaryLayerModel {
 public:
  const SystemSpec* sys = nullptr;
  int k = 0;                  // boundary characteristic family; 0 when none
  bool characteristic = false;
  bool ld = false;            // k-th field linearly degenerate
  int ell = 0;                // negative eigenvalues of A11 (case A), h (case C), 0 (h = 0)
  int n_stable = 0;           // k-1-ell, or (#negative families)-ell when non-characteristic
  int n_negative = 0;         // families with lambda < 0 at u_star
  Mat pi11;                   // projector onto the positive eigenspace of A11(u_star), h x h
  Mat stable_ref;             // orientation reference for the stable basis (at u_star)

  double glue_guard = 5e-2;   // GlueMismatch threshold on the raw (e:pera) residual

  // Unit state-space directions spanning the uniformly stable manifold of
  // the layer ODE at w, most negative rate first.
  Mat stable_basis(const Vec& w) const;
  // Decay rates matching stable_basis columns.
  Vec stable_rates(const Vec& w) const;

  Vec r_center(const Vec& u) const;      // normalized l_k . r_c = 1
  double a_coeff(const Vec& u) const;    // (r_k^T B r_c) / (r_k^T E r_c)
  double theta_center(const Vec& u) const;  // lambda_k(u) / a(u)
};

BoundaryLayerModel make_boundary_model(const SystemSpec& sys);

// Boundary condition residual in the paper's N-vector shape: full condition
// for h = 0, (pi11(u1 - u1b), u2 - u2b) in case A, (0_h, u2 - u2b) in case C.
Vec beta(const SystemSpec& sys, const BoundaryLayerModel& model, const Vec& u, const Vec& u_b);

// Independent components of beta (dimension N - ell), used by the solvers.
Vec beta_reduced(const SystemSpec& sys, const BoundaryLayerModel& model, const Vec& u,
                 const Vec& u_b);

struct CenterCurvePoint {
  Vec state;
  double z_c;
};

// Leading-order center-manifold curve: du/dtau = r_c(u), dz_c/dtau =
// theta_c(u) from (u, z_c)(0) = (u0, 0), evaluated at tau = s.
CenterCurvePoint center_curve_b_k(const SystemSpec& sys, const BoundaryLayerModel& model,
                                  const Vec& u0, double s);

enum class ZetaBranch { Lax, Layer };

struct ZetaEval {
  Vec state;
  ZetaBranch branch;
  double glue_residual = 0.0;  // raw (e:pera) mismatch when the layer branch applies
};

// Characteristic wave fan curve zeta_k.
ZetaEval zeta_k(const SystemSpec& sys, const BoundaryLayerModel& model, const Vec& u, double s);

// Stable-manifold parametrization psi_s(w, xi) = w + sum xi_i v_i^s(w),
// refined by one backward-shooting Newton pass onto the nonlinear stable
// manifold of the layer ODE at w.
Vec psi_s(const SystemSpec& sys, const BoundaryLayerModel& model, const Vec& w, const Vec& xi,
          bool refine = true);

// Composite boundary map phi = psi_s(zeta_k(u, s_k), xi); psi_p is dropped
// at leading order.
Vec phi(const SystemSpec& sys, const BoundaryLayerModel& model, const Vec& u, const Vec& xi,
        double s_k);

struct BRSolution {
  Vec xi;           // stable coordinates xi'_{ell+1..k-1}
  double s_k = 0;   // composite k-parameter s'_k
  Vec s_upper;      // s'_{k+1..N} (families k..N when non-characteristic)
  Vec u_hat;
  std::vector<Vec> upper_states;  // right states of the outgoing upper waves; back() = u_plus
  double emitted_k = 0;  // strength of the k-wave entering the domain, if any
  int branch = 0;        // 1..6 GNL, 7 (LD contact) / 8 (LD none), 0 non-characteristic
  BoundaryTraceState trace;
};

// Accurate boundary Riemann solver: Newton on beta(phi(., xi, s_k) o
// t_{k+1} o ... o t_N(u_plus), u_b) = 0, then branch classification and
// trace extraction.  warm may carry a previous solution for warm starting.
BRSolution solve_boundary_riemann(const SystemSpec& sys, const BoundaryLayerModel& model,
                                  const Vec& u_plus, const Vec& u_b,
                                  const BRSolution* warm = nullptr);

// Front emission for the accurate boundary solution.  hitting_family /
// hitting_kind describe the front whose impact generated the solve (0 =
// datum jump or t = 0) and control the rarefaction-splitting exemption.
FrontEmission accurate_boundary_fronts(const SystemSpec& sys, const BoundaryLayerModel& model,
                                       const BRSolution& sol, double r_eps, int hitting_family = 0,
                                       FrontKind hitting_kind = FrontKind::Shock);

struct SimplifiedBoundaryResult {
  FrontEmission emission;
  BoundaryTraceState trace;
  bool trace_changed = false;
};

// Simplified boundary Riemann solver for a front hitting the boundary.
SimplifiedBoundaryResult simplified_boundary_fronts(const SystemSpec& sys,
                                                    const BoundaryLayerModel& model,
                                                    const Front& hitting,
                                                    const BoundaryTraceState& trace,
                                                    double lambda_hat, double r_eps);

// Trace property (e:protra)/(e:protra2); returns the violation magnitude
// (0 when satisfied).
double trace_property_violation(const SystemSpec& sys, const BoundaryLayerModel& model,
                                const BoundaryTraceState& trace);

}  // namespace fronttrack

#endif
