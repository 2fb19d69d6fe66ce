#include "fracms/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fracms {

AngularFunction constant_angular(double c) {
  return {[c](const Vec&) { return c; }, {}};
}

Vec direction_2d(double angle) { return {std::cos(angle), std::sin(angle), 0.0}; }

EstimateWithError integrate_sphere(const AngularFunction& g, Dim d, double rel_tol) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (d == 1) {
    const double v = g({1.0, 0.0, 0.0}) + g({-1.0, 0.0, 0.0});
    return EstimateWithError::exact(v);
  }
  Integrate1dOptions opts;
  opts.rel_tol = rel_tol;
  opts.abs_tol = 1e-14;
  if (d == 2) {
    std::vector<double> cuts{0.0, kTwoPi};
    for (double b : g.breaks) {
      double a = std::fmod(b, kTwoPi);
      if (a < 0.0) a += kTwoPi;
      cuts.push_back(a);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return b - a < 1e-15; }),
               cuts.end());
    EstimateWithError total = EstimateWithError::exact(0.0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (!(cuts[i + 1] > cuts[i])) continue;
      total = total + integrate_1d([&](double t) { return g(direction_2d(t)); }, cuts[i], cuts[i + 1], opts);
    }
    return total;
  }
  // d = 3: dH^2 = dz dphi with z = cos(polar angle).
  double inner_err = 0.0;
  auto ring = [&](double z) {
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const auto r = integrate_1d(
        [&](double phi) { return g({rho * std::cos(phi), rho * std::sin(phi), z}); }, 0.0, kTwoPi, opts);
    inner_err = std::max(inner_err, r.error);
    return r.value;
  };
  Integrate1dOptions outer = opts;
  outer.max_intervals = 4000;
  auto res = integrate_1d(ring, -1.0, 1.0, outer);
  if (inner_err > 0.0 || res.kind != ErrorKind::exact)
    return EstimateWithError::analytic(res.value, res.error + 2.0 * inner_err);
  return res;
}

}  // namespace fracms
