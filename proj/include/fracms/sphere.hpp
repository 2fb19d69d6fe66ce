#pragma once

#include <functional>
#include <vector>

#include "fracms/quad.hpp"
#include "fracms/vec.hpp"

namespace fracms {

/// A function on S^{d-1}. In d = 2 `breaks` lists angles in [0, 2pi) where
/// it may jump; quadrature splits there.
struct AngularFunction {
  std::function<double(const Vec&)> f;
  std::vector<double> breaks;

  double operator()(const Vec& theta) const { return f(theta); }
};

AngularFunction constant_angular(double c);

/// Integral over the unit sphere against H^{d-1}: a two-point sum in d = 1,
/// piecewise adaptive quadrature in d = 2, nested quadrature in d = 3.
EstimateWithError integrate_sphere(const AngularFunction& g, Dim d, double rel_tol = 1e-11);

Vec direction_2d(double angle);

}  // namespace fracms
