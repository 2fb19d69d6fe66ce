#include "fracms/mass.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracms/radial.hpp"

namespace fracms {

std::string to_string(MassRoute r) { return r == MassRoute::analytic ? "analytic" : "numeric"; }

MassAtInfinity alpha_analytic(const Field& f, int p, Dim d) {
  if (p < 1) throw std::invalid_argument("p must be >= 1");
  if (f.dim() != d) throw std::invalid_argument("field dimension mismatch");
  const TailModel t = f.tail_model();
  MassAtInfinity m;
  m.p = p;
  m.route = MassRoute::analytic;
  if (std::holds_alternative<CompactSupport>(t)) return m;
  if (const auto* a = std::get_if<AngularLimit>(&t)) {
    const EstimateWithError e = integrate_sphere(a->u_inf, d);
    m.value = e.value / p;
    m.error = e.error / p;
    m.kind = e.kind;
    return m;
  }
  if (const auto* pm = std::get_if<PeriodicMean>(&t)) {
    if (d != 1) throw std::invalid_argument("periodic mean tails are d = 1 only");
    m.value = pm->mean * 2.0 / p;
    return m;
  }
  throw std::invalid_argument("alpha_analytic: tail model unknown");
}

namespace {

// s * integral_{r >= R} g(r) r^{-1-sigma} dr for g periodic in r, given by
// cuts 0 = c_0 < ... < c_m = T and values w_j.
EstimateWithError periodic_ray(const std::vector<double>& c, const std::vector<double>& w, double T, double R,
                               int p, double s) {
  const double sig = s * p;
  // a^{-sigma} - b^{-sigma}, stable for tiny sigma.
  auto D = [sig](double a, double b) { return std::pow(a, -sig) * -std::expm1(-sig * std::log(b / a)); };
  auto F = [&](double k) {
    double v = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) v += w[j] * D(k * T + c[j], k * T + c[j + 1]);
    return v;
  };
  const double K0 = std::floor(R / T);
  double total = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double a = std::max(K0 * T + c[j], R), b = K0 * T + c[j + 1];
    if (b > a) total += w[j] * D(a, b);
  }
  constexpr int kExactPeriods = 4000;
  const double K = K0 + 1.0 + kExactPeriods;
  for (double k = K0 + 1.0; k < K; k += 1.0) total += F(k);
  // Euler-Maclaurin for the sum over k >= K.
  double integral = 0.0, deriv = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double A = K * T + c[j], B = K * T + c[j + 1];
    integral += w[j] * std::pow(A, 1.0 - sig) * std::expm1((1.0 - sig) * std::log(B / A)) / (T * (1.0 - sig));
    deriv += w[j] * (-sig * T) * (std::pow(A, -sig - 1.0) - std::pow(B, -sig - 1.0));
  }
  total += integral + 0.5 * F(K) - deriv / 12.0;
  const double err = std::abs(deriv) / 12.0 * std::pow(T / (K * T), 2.0);
  // s / sigma = 1 / p
  return EstimateWithError::analytic(total / p, err / p + 1e-15 * std::abs(total / p));
}

EstimateWithError periodic_alpha(const Periodic1DF& pf, int p, double s, double R, const Vec& x) {
  const double T = pf.period;
  EstimateWithError sum = EstimateWithError::exact(0.0);
  for (double th : {1.0, -1.0}) {
    std::vector<double> cuts{0.0, T};
    for (double b : pf.breaks) {
      double c = std::fmod(th * (b - x[0]), T);
      if (c < 0.0) c += T;
      cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [T](double a, double b) { return b - a < 1e-14 * T; }),
               cuts.end());
    if (cuts.back() < T) cuts.back() = T;
    std::vector<double> vals;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      const double rm = 0.5 * (cuts[j] + cuts[j + 1]);
      const double y = x[0] + th * rm;
      double t = y - std::floor(y / T) * T;
      const auto it = std::upper_bound(pf.breaks.begin(), pf.breaks.end(), t);
      std::size_t i = static_cast<std::size_t>(it - pf.breaks.begin());
      i = i == 0 ? 0 : std::min(i - 1, pf.values.size() - 1);
      vals.push_back(pf.values[i]);
    }
    sum = sum + periodic_ray(cuts, vals, T, R, p, s);
  }
  return sum;
}

}  // namespace

EstimateWithError alpha_at_s(const Field& f, int p, double s, double R, const Vec& x) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s out of (0,1)");
  if (p < 1) throw std::invalid_argument("p must be >= 1");
  if (!(R > 0.0)) throw std::invalid_argument("R must be > 0");
  const Dim d(f.dim());
  if (f.has_periodic()) {
    const auto* pf = std::get_if<Periodic1DF>(&f.node());
    if (!pf) throw std::invalid_argument("periodic fields are supported here only as a bare profile");
    return periodic_alpha(*pf, p, s, R, x);
  }
  const double sigma = s * p;
  const bool truncate = f.has_unbounded_breaks();
  const double ln_R = std::log(R);
  const double ln_cap = truncate ? truncation_cap(sigma, ln_R) : std::numeric_limits<double>::infinity();
  double ray_err = 0.0;
  AngularFunction g;
  f.angular_breaks(g.breaks);
  g.f = [&](const Vec& th) {
    RayProblem P;
    P.s = s;
    P.sigma = sigma;
    P.ln_start = ln_R;
    P.truncate = truncate;
    P.ln_cap = ln_cap;
    P.abs_tol = 1e-15;
    f.ray_breaks(x, th, truncate ? ln_cap : kLnFar + 1.0, P.breaks);
    P.classify = [](double) { return 0; };
    P.constant = [&](double ua, double ub) { return f.constant_on(x, th, ua, ub); };
    P.h = [&](double u) { return f.eval_at(x, th, u); };
    RayResult r;
    try {
      r = integrate_ray(P);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(std::string("divergent tail: ") + e.what());
    }
    ray_err = std::max(ray_err, r.error);
    return r.value[0];
  };
  const EstimateWithError e = integrate_sphere(g, d, 1e-10);
  const double total_err = e.error + ray_err * sphere_measure(d).value;
  if (total_err == 0.0) return EstimateWithError::exact(e.value);
  return EstimateWithError::analytic(e.value, total_err);
}

std::vector<double> default_alpha_grid() { return geometric_grid(1e-1, 1e-4, 7); }

SSweepResult alpha_numeric(const Field& f, int p, Dim d, const std::vector<double>& s_grid, double R,
                           const QuadratureSpec& spec) {
  spec.validate();
  if (f.dim() != d) throw std::invalid_argument("field dimension mismatch");
  return sweep([&](double s) { return alpha_at_s(f, p, s, R); }, s_grid);
}

MassAtInfinity mass_from_sweep(const SSweepResult& r, int p) {
  MassAtInfinity m;
  m.p = p;
  m.value = r.limit;
  m.error = r.limit_error;
  m.route = MassRoute::numeric;
  m.kind = ErrorKind::analytic;
  for (const SweepPoint& pt : r.points)
    if (pt.estimate.kind == ErrorKind::statistical) m.kind = ErrorKind::statistical;
  return m;
}

EstimateWithError alpha_translated(const Field& f, int p, Dim d, std::span<const double> x, double R, double s,
                                   const QuadratureSpec& spec) {
  spec.validate();
  if (f.dim() != d) throw std::invalid_argument("field dimension mismatch");
  return alpha_at_s(f, p, s, R, to_vec(x, d));
}

}  // namespace fracms
