#include "fracms/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracms {

namespace {

// Width in u of the first piece when it starts at r = 0.
double near_window(double near_exponent, double sigma) {
  const double rate = near_exponent - sigma;
  if (!(rate > 0.0)) throw std::runtime_error("ray integral: integrand not integrable at r = 0");
  return std::min(40.0 / rate, 700.0);
}

// Piece from u = ua to ub >= ua with h non-constant.
double numeric_piece(const RayProblem& P, double ua, double ub, double& err) {
  Integrate1dOptions o;
  o.rel_tol = 1e-9;
  o.abs_tol = P.abs_tol;
  o.fail_rel_tol = 1e-4;
  const double s = P.s, sig = P.sigma;
  double total = 0.0;
  if (std::isinf(ub)) {
    // Transient part in u, then t = e^{-sigma u} for the slowly decaying rest.
    const double us = std::min(std::max(ua, 0.0) + 60.0, kLnFar);
    if (us > ua) total += numeric_piece(P, ua, us, err);
    const double from = std::max(ua, us);
    const double T = std::exp(-sig * from);
    if (T > 0.0) {
      auto g = [&](double t) {
        const double u = t > 0.0 ? -std::log(t) / sig : 1e300;
        return P.h(u);
      };
      const auto r = integrate_1d(g, 0.0, T, o);
      total += (s / sig) * r.value;
      err += (s / sig) * r.error;
    }
    return total;
  }
  if (!(ub > ua)) return 0.0;
  auto g = [&](double u) { return P.h(u) * std::exp(-sig * u); };
  const auto r = integrate_1d(g, ua, ub, o);
  err += s * r.error;
  return s * r.value;
}

}  // namespace

double truncation_cap(double sigma, double ln_start) {
  return std::max(ln_start, 0.0) + 40.0 / sigma + 1.0;
}

void ball_breaks(const Vec& origin, const Vec& dir, double radius, std::vector<double>& out) {
  const double b = dot(dir, origin);
  const double cc = dot(origin, origin) - radius * radius;
  const double disc = b * b - cc;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  const double q = -b - std::copysign(sq, b);
  for (double r : {q, q != 0.0 ? cc / q : sq})
    if (r > 0.0 && std::isfinite(r)) out.push_back(std::log(r));
}

RayResult integrate_ray(const RayProblem& P) {
  if (!(P.s > 0.0 && P.sigma > 0.0)) throw std::invalid_argument("ray integral needs s, sigma > 0");
  std::vector<double> cuts;
  cuts.reserve(P.breaks.size() + 3);
  for (double b : P.breaks)
    if (b > P.ln_start && b < P.ln_cap) cuts.push_back(b);
  if (kLnFar > P.ln_start && kLnFar < P.ln_cap) cuts.push_back(kLnFar);
  cuts.push_back(P.ln_start);
  cuts.push_back(P.truncate ? P.ln_cap : std::numeric_limits<double>::infinity());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  RayResult res;
  const double inv_p = P.s / P.sigma;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double ua = cuts[i], ub = cuts[i + 1];
    if (!(ub > ua)) continue;
    double mid;
    if (std::isinf(ua)) {
      mid = ub - 1.0;
    } else if (std::isinf(ub)) {
      mid = ua + 1.0;
    } else {
      mid = 0.5 * (ua + ub);
    }
    const int comp = P.classify(mid);
    if (comp < 0) continue;
    const std::optional<double> c = P.constant(ua, ub);
    double v = 0.0;
    if (c) {
      if (*c == 0.0) continue;
      if (std::isinf(ua)) throw std::runtime_error("ray integral: nonzero constant integrand at r = 0");
      // s * c * integral_{ua}^{ub} e^{-sigma u} du
      const double w = std::isinf(ub) ? 1.0 : -std::expm1(-P.sigma * (ub - ua));
      v = inv_p * *c * std::exp(-P.sigma * ua) * w;
    } else {
      const double start = std::isinf(ua) ? ub - near_window(P.near_exponent, P.sigma) : ua;
      v = numeric_piece(P, start, ub, res.error);
    }
    if (!std::isfinite(v)) throw std::runtime_error("ray integral: non-finite value (divergent tail?)");
    res.value[static_cast<std::size_t>(comp)] += v;
  }
  if (P.truncate) {
    // Remainder beyond ln_cap, bounded by the integrand size at the cap.
    const double hcap = std::abs(P.h(P.ln_cap));
    res.error += inv_p * std::max(hcap, 1.0) * std::exp(-P.sigma * P.ln_cap);
  }
  return res;
}

}  // namespace fracms
