#pragma once

#include "fracms/asymptotics.hpp"
#include "fracms/geometry.hpp"
#include "fracms/quad.hpp"

namespace fracms {

/// Standard Gaussian measure on R^d.
struct GaussianMeasure {
  int d = 1;
  double density(const Vec& x) const;
  /// Standard normal cdf (d = 1).
  static double cdf(double t);
};

/// Mehler kernel of the Ornstein-Uhlenbeck semigroup at time t.
struct MehlerKernel {
  double t = 1.0;
  int d = 1;
  double operator()(const Vec& x, const Vec& y) const;
  double log_value(const Vec& x, const Vec& y) const;
};

/// rho_s(x, y) = integral_0^inf M_t(x, y) t^{-s/2-1} dt.
double rho_s(const Vec& x, const Vec& y, double s, Dim d);
double rho_s(std::span<const double> x, std::span<const double> y, double s, Dim d);

/// P_s(E; Omega) = 1/2 double integral over Q_Omega of |chi_E(x) - chi_E(y)|
/// rho_s(x, y) dgamma(x) dgamma(y). Deterministic nested quadrature in d = 1,
/// Monte Carlo over x ~ gamma in d = 2.
EstimateWithError gauss_perimeter(const Region& E, const Region& omega, double s, Dim d,
                                  const QuadratureSpec& spec);

/// 2 [gamma(E) gamma(Omega \ E) + gamma(E cap Omega) gamma(E^c \ Omega)] for
/// d = 1 sets, using the normal cdf on interval decompositions.
double gauss_limit_closed_form(const Region& E, const Region& omega);

/// Gaussian measure of a d = 1 region by integrating the density between
/// boundary points (exact via the cdf).
double gaussian_measure_1d(const Region& r);

/// Dominated-convergence value 2 [gamma(E) gamma(E^c) - gamma(E \ Omega) gamma(E^c \ Omega)]
/// by direct quadrature of the Gaussian density (d = 1, 2).
double gauss_limit_dominated(const Region& E, const Region& omega, Dim d);

}  // namespace fracms
