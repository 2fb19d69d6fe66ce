#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "fracms/fields.hpp"

namespace fracms {

/// One-dimensional kernel integral along the ray y = origin + r dir:
///
///   s * integral over r > e^{ln_start} of h(r) r^{-1-sigma} dr
///
/// split into up to three components by `classify`. Everything is expressed in
/// u = ln r; constant pieces are integrated in closed form, which keeps the
/// result bounded as s -> 0 (s / sigma = 1 / p).
struct RayProblem {
  double s = 0.0;
  double sigma = 0.0;
  double ln_start = -std::numeric_limits<double>::infinity();
  /// Breakpoints in u, unsorted, may contain duplicates or values below ln_start.
  std::vector<double> breaks;
  /// Component index in [0, 3) for the piece containing u, or -1 to skip it.
  std::function<int(double u)> classify;
  /// Value of h if it is constant on (ua, ub).
  std::function<std::optional<double>(double ua, double ub)> constant;
  /// h at u.
  std::function<double(double u)> h;
  /// h(r) = O(r^near_exponent) as r -> 0 on the first piece.
  double near_exponent = 2.0;
  /// When the breaks never end, integrate up to ln_cap and bound the rest.
  bool truncate = false;
  double ln_cap = std::numeric_limits<double>::infinity();
  /// Absolute floor for the u-integrals of h e^{-sigma u}.
  double abs_tol = 1e-300;
};

struct RayResult {
  std::array<double, 3> value{0.0, 0.0, 0.0};
  double error = 0.0;
};

RayResult integrate_ray(const RayProblem& prob);

/// ln_cap that makes the truncated remainder of a slowly decaying tail
/// negligible (weight e^{-sigma u} below e^{-40}).
double truncation_cap(double sigma, double ln_start);

/// Breaks of |y| = R along origin + r dir, in u.
void ball_breaks(const Vec& origin, const Vec& dir, double radius, std::vector<double>& out);

}  // namespace fracms
