#include "fracms/gausskernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fracms/radial.hpp"

namespace fracms {

namespace {
constexpr double kPi = std::numbers::pi;
// Gaussian mass beyond this radius is below 1e-21 and is dropped.
constexpr double kGaussCut = 10.0;
}  // namespace

double GaussianMeasure::density(const Vec& x) const {
  return std::pow(2.0 * kPi, -0.5 * d) * std::exp(-0.5 * dot(x, x));
}

double GaussianMeasure::cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

double MehlerKernel::log_value(const Vec& x, const Vec& y) const {
  const double den = -std::expm1(-2.0 * t);  // 1 - e^{-2t}
  const double e1 = std::exp(-t), e2 = std::exp(-2.0 * t);
  const Vec dxy = x - y;
  // e2 |x|^2 - 2 e1 x.y + e2 |y|^2 rewritten without cancellation near x = y.
  const double num = e2 * dot(dxy, dxy) - 2.0 * e1 * (-std::expm1(-t)) * dot(x, y);
  return -0.5 * d * std::log(den) - num / (2.0 * den);
}

double MehlerKernel::operator()(const Vec& x, const Vec& y) const { return std::exp(log_value(x, y)); }

double rho_s(const Vec& x, const Vec& y, double s, Dim d) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s out of (0,1)");
  const Vec dxy = x - y;
  const double dist2 = dot(dxy, dxy);
  if (dist2 == 0.0) throw std::invalid_argument("rho_s diverges at x = y");
  const double half = 0.5 * s;
  Integrate1dOptions o;
  o.rel_tol = 1e-10;
  o.abs_tol = 1e-300;
  o.fail_rel_tol = 1e-6;
  double small_t = 0.0;
  const double t_min = dist2 / 3200.0;
  if (t_min < 1.0) {
    auto g = [&](double u) {
      const MehlerKernel M{std::exp(u), d};
      return std::exp(M.log_value(x, y) - half * u);
    };
    small_t = integrate_1d(g, std::log(t_min), 0.0, o).value;
  }
  auto h = [&](double t) {
    const MehlerKernel M{t, d};
    return std::expm1(M.log_value(x, y)) * std::pow(t, -half - 1.0);
  };
  const double large_t = integrate_1d(h, 1.0, 45.0, o).value;
  return small_t + large_t + 2.0 / s;
}

double rho_s(std::span<const double> x, std::span<const double> y, double s, Dim d) {
  return rho_s(to_vec(x, d), to_vec(y, d), s, d);
}

namespace {

struct GaussPerimeter {
  const Region& E;
  const Region& omega;
  double s;
  int d;

  // 1/2 integral along x + r dir of the Q_Omega-restricted jump, r^{d-1} dr.
  double ray(const Vec& x, const Vec& dir) const {
    const bool ex = E.contains(x);
    const bool ox = omega.contains(x);
    std::vector<double> lb;
    const double cap = std::log(4.0 * kGaussCut + norm(x));
    E.ray_breaks(x, dir, cap, lb);
    omega.ray_breaks(x, dir, cap, lb);
    ball_breaks(x, dir, kGaussCut, lb);
    std::vector<double> rs{0.0};
    for (double l : lb) rs.push_back(std::exp(l));
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    const GaussianMeasure gm{d};
    Integrate1dOptions o;
    o.rel_tol = 1e-8;
    o.abs_tol = 1e-300;
    o.fail_rel_tol = 1e-4;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
      const double a = rs[i], b = rs[i + 1];
      if (a == 0.0 || !(b > a)) continue;
      const Vec ym = x + (0.5 * (a + b)) * dir;
      if (dot(ym, ym) >= kGaussCut * kGaussCut) continue;
      if (E.contains(ym) == ex) continue;
      if (!ox && !omega.contains(ym)) continue;
      auto g = [&](double u) {
        const double r = std::exp(u);
        const Vec y = x + r * dir;
        return rho_s(x, y, s, Dim(d)) * gm.density(y) * std::pow(r, d);
      };
      total += integrate_1d(g, std::log(a), std::log(b), o).value;
    }
    return 0.5 * total;
  }
};

// Breakpoints of region membership on the real line inside [-L, L].
std::vector<double> line_breaks(const Region& r, double L) {
  std::vector<double> lb;
  const Vec o{-L - 1.0, 0.0, 0.0}, dir{1.0, 0.0, 0.0};
  r.ray_breaks(o, dir, std::log(2.0 * L + 2.0), lb);
  std::vector<double> xs;
  for (double l : lb) {
    const double x = o[0] + std::exp(l);
    if (x > -L && x < L) xs.push_back(x);
  }
  return xs;
}

}  // namespace

EstimateWithError gauss_perimeter(const Region& E, const Region& omega, double s, Dim d,
                                  const QuadratureSpec& spec) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s out of (0,1)");
  if (d != 1 && d != 2) throw std::invalid_argument("gauss_perimeter supports d = 1, 2");
  if (E.dim() != d || omega.dim() != d) throw std::invalid_argument("dimension mismatch");
  const GaussPerimeter gp{E, omega, s, d};
  const GaussianMeasure gm{d};
  if (d == 1) {
    std::vector<double> cuts{-kGaussCut, kGaussCut};
    const std::vector<double> jumps = line_breaks(E, kGaussCut);
    for (double x : jumps) cuts.push_back(x);
    for (double x : line_breaks(omega, kGaussCut)) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    Integrate1dOptions o;
    o.rel_tol = 1e-7;
    o.abs_tol = 1e-300;
    o.fail_rel_tol = 1e-4;
    auto is_jump = [&](double c) { return std::find(jumps.begin(), jumps.end(), c) != jumps.end(); };
    EstimateWithError total = EstimateWithError::exact(0.0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      // The inner integral blows up like dist^{-s} at jumps of chi_E.
      o.left_exponent = is_jump(cuts[i]) ? -s : 0.0;
      o.right_exponent = is_jump(cuts[i + 1]) ? -s : 0.0;
      auto f = [&](double t) {
        const Vec x{t, 0.0, 0.0};
        return gm.density(x) * (gp.ray(x, {1.0, 0.0, 0.0}) + gp.ray(x, {-1.0, 0.0, 0.0}));
      };
      total = total + integrate_1d(f, cuts[i], cuts[i + 1], o);
    }
    return EstimateWithError::analytic(total.value, std::max(total.error, 1e-7 * std::abs(total.value)));
  }

  class GaussDirSampler final : public PairSampler {
   public:
    PairSample sample(Rng& rng) const override {
      PairSample p;
      std::normal_distribution<double> n01;
      p.x = {n01(rng), n01(rng), 0.0};
      p.y = uniform_direction(2, rng);
      p.density = density(p.x, p.y);
      return p;
    }
    double density(const Vec& x, const Vec&) const override {
      return GaussianMeasure{2}.density(x) / (2.0 * kPi);
    }
  };
  GaussDirSampler sampler;
  return mc_double_integral([&](const Vec& x, const Vec& th) { return gm.density(x) * gp.ray(x, th); }, sampler,
                            spec);
}

double gaussian_measure_1d(const Region& r) {
  if (r.dim() != 1) throw std::invalid_argument("gaussian_measure_1d needs d = 1");
  constexpr double L = 40.0;
  std::vector<double> cuts{-L, L};
  for (double x : line_breaks(r, L)) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (r.contains(Vec{0.5 * (a + b), 0.0, 0.0}))
      m += GaussianMeasure::cdf(b) - GaussianMeasure::cdf(a);
  }
  return m;
}

double gauss_limit_closed_form(const Region& E, const Region& omega) {
  const Region Ec = make_complement(E), Oc = make_complement(omega);
  const double gE = gaussian_measure_1d(E);
  const double gOmE = gaussian_measure_1d(make_intersection({omega, Ec}));
  const double gEO = gaussian_measure_1d(make_intersection({E, omega}));
  const double gEcOc = gaussian_measure_1d(make_intersection({Ec, Oc}));
  return 2.0 * (gE * gOmE + gEO * gEcOc);
}

double gauss_limit_dominated(const Region& E, const Region& omega, Dim d) {
  const GaussianMeasure gm{d};
  std::vector<double> lo(d, -kGaussCut - 2.0), hi(d, kGaussCut + 2.0);
  const Region window = make_box(d, lo, hi);
  auto gmeasure = [&](const Region& r) {
    return integrate_over_region([&](const Vec& x) { return gm.density(x); }, make_intersection({r, window}), {},
                                 1e-11)
        .value;
  };
  const Region Ec = make_complement(E), Oc = make_complement(omega);
  const double gE = gmeasure(E), gEc = gmeasure(Ec);
  const double gEmO = gmeasure(make_intersection({E, Oc}));
  const double gEcmO = gmeasure(make_intersection({Ec, Oc}));
  return 2.0 * (gE * gEc - gEmO * gEcmO);
}

}  // namespace fracms
