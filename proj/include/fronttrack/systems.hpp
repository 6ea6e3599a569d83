#ifndef FRONTTRACK_SYSTEMS_HPP
#define FRONTTRACK_SYSTEMS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fronttrack/types.hpp"

namespace fronttrack {

enum class FieldKind { GenuinelyNonlinear, LinearlyDegenerate };
enum class Hyp5Case { A, C };

// A conservation system g(v)_t + f(v)_x = 0 together with the normal-form
// coefficients E, A, B, G of its (rescaled) viscous regularization
// E u_t + A u_x = B u_xx + G(u, u_x) u_x.  The change of variables v(u) is
// the identity for every built-in system.
class SystemSpec {
 public:
  SystemSpec();
  int N = 0;
  int h = 0;  // dim ker B
  std::uint64_t instance_id = 0;  // unique per instance; memoization key
  std::string id;
  std::map<std::string, double> params;

  std::function<Vec(const Vec&)> conserved;  // g(v)
  std::function<Vec(const Vec&)> flux;       // f(v)
  std::function<Vec(const Vec&)> v_of_u;     // change of variables
  std::function<Vec(const Vec&)> u_of_v;

  std::function<Mat(const Vec&)> E;
  std::function<Mat(const Vec&)> A;
  std::function<Mat(const Vec&)> B;
  // G(u, w) w with the block structure of the normal form; zero for all
  // built-in systems.
  std::function<Mat(const Vec&, const Vec&)> G;

  Vec u_star;
  double box_halfwidth = 0.25;
  double s_max = 0.5;  // curve-parameter bound; exceeding it is an error
  std::vector<FieldKind> field_kinds;
  Hyp5Case hyp5_case = Hyp5Case::A;

  bool in_working_box(const Vec& u) const {
    return ((u - u_star).cwiseAbs().array() <= box_halfwidth + 1e-14).all();
  }
  Vec clamp_check(const Vec& u, const char* who) const;

  // Dg^{-1} Df at v(u); equals E^{-1} A by the normal-form consistency.
  Mat quasilinear(const Vec& u) const;
};

struct EigenData {
  Vec lambdas;        // sorted ascending
  Mat right_vectors;  // columns r_i
  Mat left_vectors;   // rows l_i, biorthonormal to right_vectors
};

// Eigenstructure of E^{-1} A at u, with the curve-parametrization
// normalization: grad(lambda_i) . r_i = 1 for genuinely nonlinear fields,
// |r_i| = 1 with sign continuity pinned at u_star for linearly degenerate
// ones.
EigenData eigen(const SystemSpec& sys, const Vec& u);

// Raw (unit-vector) eigenstructure without the GNL rescaling; used by
// classification and by hypothesis checks.
EigenData eigen_raw(const SystemSpec& sys, const Vec& u);

// Directional derivative grad(lambda_i) . r along a given direction.
double lambda_directional(const SystemSpec& sys, const Vec& u, int family, const Vec& dir);

struct FieldReport {
  FieldKind kind;
  double min_gnl;  // min over samples of grad(lambda).r with unit r
};

FieldReport classify_field(const SystemSpec& sys, int family, const std::vector<Vec>& samples);

struct HypothesisReport {
  bool block_structure = false;   // (B), (e), (G) block shapes
  bool symmetry = false;          // A symmetric, E SPD
  bool kawashima_shizuta = false;
  bool strict_hyperbolicity = false;
  bool hyp5_consistent = false;
  double spectral_gap = 0.0;      // measured min over grid of min_{i != k} |lambda_i|
  double min_eig_sep = 0.0;
  std::string detail;
  bool all() const {
    return block_structure && symmetry && kawashima_shizuta && strict_hyperbolicity &&
           hyp5_consistent;
  }
};

HypothesisReport check_hypotheses(const SystemSpec& sys, int grid_per_axis = 5);

// Index (1-based) of the family with lambda_k(u_star) ~ 0.  Throws
// NoCharacteristicFamily when every eigenvalue is bounded away from zero; in
// that case the boundary module runs its non-characteristic branch.
int boundary_char_family(const SystemSpec& sys);

// Built-in systems.  ids: burgers, p_system, isentropic_euler, full_euler,
// linear.  params may carry gamma, K, R, e_theta, nu, kappa, viscosity
// ("physical"/"identity"), and u_star components (ustar0, ustar1, ...).
std::shared_ptr<SystemSpec> make_system(const std::string& id,
                                        const std::map<std::string, double>& params = {});

}  // namespace fronttrack

#endif
