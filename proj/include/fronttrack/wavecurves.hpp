#ifndef FRONTTRACK_WAVECURVES_HPP
#define FRONTTRACK_WAVECURVES_HPP

#include "fronttrack/systems.hpp"

namespace fronttrack {

enum class WaveBranch { Rarefaction, Shock, Contact };

struct CurveEval {
  Vec state;
  double speed = 0.0;  // shock speed on the shock branch, characteristic speed otherwise
  WaveBranch branch = WaveBranch::Rarefaction;
};

// Integral curve of r_i through u, evaluated at parameter s (RK4, step s/64).
Vec rarefaction_curve(const SystemSpec& sys, int family, const Vec& u, double s);

// Hugoniot locus through u with the parametrization dh/ds|_0 = r_i(u);
// returns the state and the shock speed sigma_i(u, s) solving the
// Rankine-Hugoniot conditions.  Predictor-corrector continuation from s = 0.
CurveEval hugoniot(const SystemSpec& sys, int family, const Vec& u, double s);

double sigma_speed(const SystemSpec& sys, int family, const Vec& u, double s);

// Wave fan curve of admissible left states t_i: rarefaction branch for
// s < 0, shock branch for s > 0 (GNL); integral curve for every s (LD).
CurveEval wave_fan_curve(const SystemSpec& sys, int family, const Vec& u, double s);

// Composite front speed of the k-th family: sigma_k(u, s) for s >= 0,
// lambda_k(t_k(u, s)) for s < 0.
double varsigma(const SystemSpec& sys, int k, const Vec& u, double s);

// Unique s with sigma_k(u, s) = 0 (GNL k).
double underline_s(const SystemSpec& sys, int k, const Vec& u);

// Unique s with lambda_k(i_k(u, s)) = 0 (GNL k).
double bar_s(const SystemSpec& sys, int k, const Vec& u);

// Inverse of the left-state curve: the unique w with t_i(w, s) = u_left.
// This is the right-state wave fan curve of Remark "m_i": m_i(u_left, -s).
Vec right_state_from_left(const SystemSpec& sys, int family, const Vec& u_left, double s);

double lambda_of(const SystemSpec& sys, int family, const Vec& u);

}  // namespace fronttrack

#endif
