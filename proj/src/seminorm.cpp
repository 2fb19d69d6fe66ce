#include "fracms/seminorm.hpp"

#include <cmath>
#include <stdexcept>

#include "fracms/radial.hpp"

namespace fracms {

double default_radius(const Region& omega) {
  const auto r = omega.bounding_radius();
  if (!r || omega.far_kind() != FarKind::bounded) throw std::invalid_argument("Omega must be bounded");
  return 2.0 * *r;
}

namespace {

void check_common(const Field& f, const Region& omega, double s, int p) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s out of (0,1)");
  if (p < 1) throw std::invalid_argument("p must be >= 1");
  if (f.dim() != omega.dim()) throw std::invalid_argument("field and Omega dimensions differ");
  if (omega.far_kind() != FarKind::bounded || !omega.bounding_box()) throw std::invalid_argument("Omega must be bounded");
  if (f.has_periodic()) throw std::invalid_argument("periodic fields are not supported by the seminorm engine");
  for (int i = 0; i < f.dim(); ++i)
    for (double sign : {1.0, -1.0}) {
      Vec dir{0.0, 0.0, 0.0};
      dir[i] = sign;
      if (std::isnan(f.eval_far(dir, kLnFar)))
        throw std::invalid_argument("field grows at infinity (seminorm on Q_Omega infinite)");
    }
  if (f.has_jumps() && s * p >= 1.0)
    throw std::invalid_argument("s p must be < 1 for fields with jumps (seminorm infinite)");
}

// Largest |f| on a probe grid over the bounding box of Omega (at least 1).
double field_scale(const Field& f, const Region& omega) {
  const auto bb = *omega.bounding_box();
  const int d = omega.dim();
  constexpr int kProbe = 9;
  double m = 1.0;
  const int n = d == 1 ? kProbe : d == 2 ? kProbe * kProbe : kProbe * kProbe * kProbe;
  for (int k = 0; k < n; ++k) {
    Vec x{0.0, 0.0, 0.0};
    int idx = k;
    for (int i = 0; i < d; ++i) {
      x[i] = bb.first[i] + (bb.second[i] - bb.first[i]) * (idx % kProbe + 0.5) / kProbe;
      idx /= kProbe;
    }
    const double v = std::abs(f.eval(x));
    if (std::isfinite(v)) m = std::max(m, v);
  }
  return m;
}

EstimateWithError tidy(EstimateWithError e) {
  if (e.value == 0.0 && e.error == 0.0) return EstimateWithError::exact(0.0);
  return e;
}

}  // namespace

SeminormBreakdown gagliardo_qomega(const Field& f, const Region& omega, double s, int p, double R,
                                   const QuadratureSpec& spec) {
  check_common(f, omega, s, p);
  spec.validate();
  const double rb = *omega.bounding_radius();
  if (!(R >= 2.0 * rb * (1.0 - 1e-12))) throw std::invalid_argument("R must be >= 2 * bounding radius of Omega");
  const int d = omega.dim();
  const double sigma = s * p;
  const bool truncate = f.has_unbounded_breaks();
  const double ln_cap = truncate ? truncation_cap(sigma, std::log(R)) : std::numeric_limits<double>::infinity();
  const double break_cap = truncate ? ln_cap : kLnFar + 1.0;
  const double R2 = R * R;
  const double h_floor = 1e-13 * std::pow(field_scale(f, omega), p);

  auto ray = [&](const Vec& x, double fx, const Vec& th) {
    RayProblem P;
    P.s = s;
    P.sigma = sigma;
    P.truncate = truncate;
    P.ln_cap = ln_cap;
    P.near_exponent = p;
    P.abs_tol = h_floor;
    omega.ray_breaks(x, th, break_cap, P.breaks);
    ball_breaks(x, th, R, P.breaks);
    f.ray_breaks(x, th, break_cap, P.breaks);
    P.classify = [&](double u) {
      if (omega.contains_at(x, th, u)) return 0;
      if (u >= kLnFar) return 2;
      const Vec y = x + std::exp(u) * th;
      return dot(y, y) < R2 ? 1 : 2;
    };
    P.constant = [&](double ua, double ub) -> std::optional<double> {
      const auto c = f.constant_on(x, th, ua, ub);
      if (!c) return std::nullopt;
      return std::pow(std::abs(fx - *c), p);
    };
    P.h = [&](double u) {
      const double fy = f.eval_at(x, th, u);
      if (std::isnan(fy)) throw std::invalid_argument("field grows at infinity: tail term undefined");
      return std::pow(std::abs(fx - fy), p);
    };
    return integrate_ray(P);
  };

  const auto bb = *omega.bounding_box();
  DirectionPairSampler sampler(bb.first, bb.second, Dim(d));
  std::function<std::array<double, 4>(const PairSample&)> g = [&](const PairSample& smp) {
    std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
    if (!omega.contains(smp.x)) return out;
    const double fx = f.eval(smp.x);
    std::array<double, 3> acc{0.0, 0.0, 0.0};
    if (d == 1) {
      for (double sign : {1.0, -1.0}) {
        const RayResult r = ray(smp.x, fx, Vec{sign, 0.0, 0.0});
        for (int k = 0; k < 3; ++k) acc[k] += 0.5 * r.value[k];
      }
    } else {
      acc = ray(smp.x, fx, smp.y).value;
    }
    for (int k = 0; k < 3; ++k) out[k] = acc[k] / s;
    out[3] = out[0] + 2.0 * (out[1] + out[2]);
    return out;
  };
  const auto est = mc_integrate<4>(g, sampler, spec);
  SeminormBreakdown b;
  b.interior_interior = tidy(est[0]);
  b.interior_exterior_near = tidy(est[1]);
  b.interior_exterior_tail = tidy(est[2]);
  b.total = tidy(est[3]);
  b.s = s;
  b.p = p;
  b.R = R;
  return b;
}

EstimateWithError fractional_perimeter(const Region& E, const Region& omega, double s, double R,
                                       const QuadratureSpec& spec) {
  const SeminormBreakdown b = gagliardo_qomega(make_indicator(E), omega, s, 1, R, spec);
  return 0.5 * b.total;
}

HardyPair hardy_pair(const Field& f, const Region& omega, double s, double delta, Dim d,
                     const QuadratureSpec& spec) {
  if (f.dim() != d || omega.dim() != d) throw std::invalid_argument("dimension mismatch");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s out of (0,1)");
  if (!(s < delta * delta / 8.0)) throw std::invalid_argument("hardy_pair requires s < delta^2/8");
  const Field ext = make_product({f, make_indicator(omega)});

  auto weight = [&](const Vec& x) {
    const double v = f.eval(x);
    const double r = norm(x);
    if (r == 0.0) return 0.0;
    return v * v * std::pow(r, -2.0 * s);
  };
  RayBreakFn origin_break = [&f](const Vec& o, const Vec& dir, double ln_cap, std::vector<double>& out) {
    const double r = -dot(o, dir);
    if (r > 0.0 && std::log(r) < ln_cap) out.push_back(std::log(r));
    f.ray_breaks(o, dir, ln_cap, out);
  };
  const EstimateWithError integral = integrate_over_region(weight, omega, origin_break, 1e-8);
  const double c = sphere_measure(d).value * (1.0 - delta) * (1.0 - delta) * std::pow(2.0, -2.0 * s - 1.0);

  HardyPair h;
  h.lhs = c * integral;
  const SeminormBreakdown b = gagliardo_qomega(ext, omega, s, 2, default_radius(omega), spec);
  h.rhs = (0.5 * s) * b.total;
  return h;
}

EstimateWithError interior_interior_pair_mc(const Field& f, const Region& omega, double s, int p,
                                            double exponent, double r_min, double r_max,
                                            const QuadratureSpec& spec) {
  check_common(f, omega, s, p);
  const auto bb = *omega.bounding_box();
  const int d = omega.dim();
  PowerLawPairSampler sampler(bb.first, bb.second, Dim(d), exponent, r_min, r_max);
  const double kexp = d + s * p;
  return mc_double_integral(
      [&](const Vec& x, const Vec& y) {
        if (!omega.contains(x) || !omega.contains(y)) return 0.0;
        const double r = norm(x - y);
        if (r == 0.0) return 0.0;
        return std::pow(std::abs(f.eval(x) - f.eval(y)), p) * std::pow(r, -kexp);
      },
      sampler, spec);
}

}  // namespace fracms
