#ifndef FRONTTRACK_RIEMANN_HPP
#define FRONTTRACK_RIEMANN_HPP

#include <set>

#include "fronttrack/fronts.hpp"
#include "fronttrack/wavecurves.hpp"

namespace fronttrack {

// Wave decomposition of a Riemann problem: strengths s_1..s_N with
// u_minus = t_1(.,s_1) o ... o t_N(u_plus, s_N); intermediate_states[0] is
// u_minus, intermediate_states[N] is u_plus, the family-i wave sits between
// states i-1 and i.
struct WaveFan {
  Vec strengths;
  std::vector<Vec> intermediate_states;
};

WaveFan solve_riemann(const SystemSpec& sys, const Vec& u_minus, const Vec& u_plus);

// Reconstruct the fan from known strengths (right to left).
WaveFan fan_from_strengths(const SystemSpec& sys, const Vec& u_plus, const Vec& strengths);

// Accurate front emission: one front per shock/contact, rarefactions split
// into ceil(|s|/r_eps) equal pieces travelling at the characteristic speed
// of their right state.  Families in `exempt` keep their rarefaction whole
// (re-emission of an incoming rarefaction of the same family).
FrontEmission accurate_fronts(const SystemSpec& sys, int k, const WaveFan& fan, double r_eps,
                              const std::set<int>& exempt = {});

// Simplified interior solver: outgoing fronts of the incoming families plus
// one non-physical front of speed lambda_hat.  front_a is to the left.
FrontEmission simplified_fronts(const SystemSpec& sys, int k, const Front& front_a,
                                const Front& front_b, double lambda_hat);

// Front kind of a strength-s wave of the given family.
FrontKind kind_of(const SystemSpec& sys, int family, double s);

}  // namespace fronttrack

#endif
