#pragma once

#include <vector>

#include "fracms/asymptotics.hpp"
#include "fracms/fields.hpp"

namespace fracms {

enum class MassRoute { analytic, numeric };

std::string to_string(MassRoute r);

struct MassAtInfinity {
  int p = 1;
  double value = 0.0;
  MassRoute route = MassRoute::analytic;
  double error = 0.0;
  ErrorKind kind = ErrorKind::exact;
};

/// Mass at infinity from the declared tail model. Throws for Unknown tails.
MassAtInfinity alpha_analytic(const Field& f, int p, Dim d);

/// s * integral over |y - x| >= R of f(y) |y - x|^{-(d + s p)} dy at one s,
/// by angular quadrature of per-ray integrals (closed form where f is
/// constant along the ray, exact per-period sums for periodic profiles).
EstimateWithError alpha_at_s(const Field& f, int p, double s, double R, const Vec& x = Vec{0.0, 0.0, 0.0});

/// Default s grid: 1e-1 down to 1e-4 with ratio 10^{-1/2}.
std::vector<double> default_alpha_grid();

SSweepResult alpha_numeric(const Field& f, int p, Dim d, const std::vector<double>& s_grid, double R,
                           const QuadratureSpec& spec);

MassAtInfinity mass_from_sweep(const SSweepResult& r, int p);

EstimateWithError alpha_translated(const Field& f, int p, Dim d, std::span<const double> x, double R, double s,
                                   const QuadratureSpec& spec);

}  // namespace fracms
