#pragma once

#include "fracms/fields.hpp"
#include "fracms/geometry.hpp"
#include "fracms/quad.hpp"

namespace fracms {

/// Localized Gagliardo energy over Q_Omega, split as
/// total = interior_interior + 2 (near + tail).
struct SeminormBreakdown {
  EstimateWithError interior_interior;
  EstimateWithError interior_exterior_near;  // y in B_R \ Omega
  EstimateWithError interior_exterior_tail;  // y outside B_R
  EstimateWithError total;
  double s = 0.0;
  double p = 0.0;
  double R = 0.0;
};

/// [f]^p over Q_Omega at one s. The outer (x, direction) integral is Monte
/// Carlo over the bounding box of Omega; the radial integral along each ray is
/// done piecewise, in closed form wherever f is constant. The same seed gives
/// the same sample points for every s (common random numbers).
SeminormBreakdown gagliardo_qomega(const Field& f, const Region& omega, double s, int p, double R,
                                   const QuadratureSpec& spec);

/// Per_s(E; Omega) = 1/2 [chi_E]_{W^{s,1}(Q_Omega)}.
EstimateWithError fractional_perimeter(const Region& E, const Region& omega, double s, double R,
                                       const QuadratureSpec& spec);

struct HardyPair {
  EstimateWithError lhs;
  EstimateWithError rhs;
};

/// Both sides of the fractional Hardy inequality for the zero extension of f
/// outside Omega. Requires s < delta^2 / 8.
HardyPair hardy_pair(const Field& f, const Region& omega, double s, double delta, Dim d,
                     const QuadratureSpec& spec);

/// Interior-interior term by direct pair sampling: x uniform in the bounding
/// box, y = x + z with density of z proportional to |z|^{-exponent} on
/// [r_min, r_max]. Independent of the ray engine; used as a cross-check.
EstimateWithError interior_interior_pair_mc(const Field& f, const Region& omega, double s, int p,
                                            double exponent, double r_min, double r_max,
                                            const QuadratureSpec& spec);

/// Smallest admissible R: twice the bounding radius of Omega.
double default_radius(const Region& omega);

}  // namespace fracms
