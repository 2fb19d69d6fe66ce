#include "fracms/limits.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace fracms {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double alpha_or_throw(const Field& f, int p, Dim d, const char* what) {
  try {
    return alpha_analytic(f, p, d).value;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument(std::string("no analytic mass at infinity for ") + what +
                                " and no numeric value supplied");
  }
}

double measure(const Region& a) { return volume(a).value; }

}  // namespace

EstimateWithError integrate_power(const Field& f, const Region& omega, int k) {
  if (k == 0) return volume(omega);
  RayBreakFn fb = [&f](const Vec& o, const Vec& dir, double cap, std::vector<double>& out) {
    f.ray_breaks(o, dir, cap, out);
  };
  return integrate_over_region(
      [&](const Vec& x) {
        const double v = f.eval(x);
        double r = 1.0;
        for (int i = 0; i < k; ++i) r *= v;
        return r;
      },
      omega, fb);
}

double F0_main(const Field& f, const Region& omega, Dim d, std::optional<double> alpha_f,
               std::optional<double> alpha_f2) {
  if (f.dim() != d || omega.dim() != d) throw std::invalid_argument("dimension mismatch");
  const double a1 = alpha_analytic(make_constant(d, 1.0), 2, d).value;
  const double af = alpha_f ? *alpha_f : alpha_or_throw(f, 2, d, "f");
  const double af2 = alpha_f2 ? *alpha_f2 : alpha_or_throw(power(f, 2), 2, d, "f^2");
  const double i1 = integrate_power(f, omega, 1).value;
  const double i2 = integrate_power(f, omega, 2).value;
  const double vol = volume(omega).value;
  return a1 * i2 - 2.0 * af * i1 + af2 * vol;
}

double binomial_alternating_sum(const Field& f, const Region& omega, int p, Dim d) {
  if (p < 1) throw std::invalid_argument("p must be >= 1");
  if (f.dim() != d || omega.dim() != d) throw std::invalid_argument("dimension mismatch");
  double sum = 0.0;
  for (int k = 0; k <= p; ++k) {
    const double a = alpha_or_throw(power(f, k), p, d, "f^k");
    const double in = integrate_power(f, omega, p - k).value;
    sum += binom(p, k) * ((k % 2) ? -1.0 : 1.0) * a * in;
  }
  return sum;
}

double F0_even_p(const Field& f, const Region& omega, int p, Dim d) {
  if (p < 2 || p % 2 != 0) throw std::invalid_argument("F0_even_p requires an even p (the formula fails for odd p)");
  return binomial_alternating_sum(f, omega, p, d);
}

double interaction_energy(const Field& f, const Region& omega, Dim d, double rel_tol) {
  if (f.dim() != d || omega.dim() != d) throw std::invalid_argument("dimension mismatch");
  const TailModel t = f.tail_model();
  AngularFunction uinf;
  if (const auto* a = std::get_if<AngularLimit>(&t)) {
    uinf = a->u_inf;
  } else if (std::holds_alternative<CompactSupport>(t)) {
    uinf = constant_angular(0.0);
  } else {
    throw std::invalid_argument("interaction_energy requires an angular limit");
  }
  RayBreakFn fb = [&f](const Vec& o, const Vec& dir, double cap, std::vector<double>& out) {
    f.ray_breaks(o, dir, cap, out);
  };
  // The inner sphere integral depends on x only through f(x); piecewise
  // constant fields revisit the same few values.
  std::unordered_map<double, double> inner;
  const auto e = integrate_over_region(
      [&](const Vec& x) {
        const double fx = f.eval(x);
        if (const auto it = inner.find(fx); it != inner.end()) return it->second;
        AngularFunction g{[&](const Vec& th) {
                            const double diff = fx - uinf(th);
                            return diff * diff;
                          },
                          uinf.breaks};
        const double v = integrate_sphere(g, d, 0.1 * rel_tol).value;
        if (inner.size() < 4096) inner.emplace(fx, v);
        return v;
      },
      omega, fb, rel_tol);
  return 0.5 * e.value;
}

bool half_measure(const Region& E, const Region& omega) {
  const double m1 = measure(make_intersection({E, omega}));
  const double m2 = measure(make_intersection({make_complement(E), omega}));
  return std::abs(m1 - m2) <= 1e-7 * std::max({m1, m2, 1e-300});
}

double perimeter_limit(const Region& E, const Region& omega, Dim d) {
  if (E.dim() != d || omega.dim() != d) throw std::invalid_argument("dimension mismatch");
  const double dw = sphere_measure(d).value;
  const double m_in = measure(make_intersection({E, omega}));
  const double m_out = measure(make_intersection({make_complement(E), omega}));
  const Field chi = make_indicator(E);
  if (std::holds_alternative<UnknownTail>(chi.tail_model())) {
    if (std::abs(m_in - m_out) <= 1e-7 * std::max({m_in, m_out, 1e-300})) return 0.5 * dw * m_in;
    throw std::invalid_argument("alpha_1(E) does not exist and the half-measure condition fails");
  }
  const double a1 = alpha_analytic(chi, 1, d).value;
  return 0.5 * ((dw - a1) * m_in + a1 * m_out);
}

double critical_alpha(const Field& f, const Region& omega, Dim d, const QuadratureSpec& spec) {
  (void)spec;
  if (f.dim() != d || omega.dim() != d) throw std::invalid_argument("dimension mismatch");
  if (const auto* ind = std::get_if<IndicatorF>(&f.node())) {
    // Derived field: |E^c cap Omega| on E, |E cap Omega| off E.
    const double m_in = measure(make_intersection({ind->region, omega}));
    const double m_out = measure(make_intersection({make_complement(ind->region), omega}));
    const double a_one = alpha_analytic(make_constant(d, 1.0), 2, d).value;
    if (std::abs(m_in - m_out) <= 1e-7 * std::max({m_in, m_out, 1e-300})) return m_in * a_one;
    const double aE = alpha_or_throw(f, 2, d, "E");
    return m_out * aE + m_in * (a_one - aE);
  }
  return F0_main(f, omega, d);
}

LimitReport limit_report(const Field& f, const Region& omega, Dim d, const QuadratureSpec& spec) {
  LimitReport r;
  auto attempt = [&](const char* name, auto&& fn) -> std::optional<double> {
    try {
      return fn();
    } catch (const std::exception& e) {
      r.notes.push_back(std::string(name) + ": " + e.what());
      return std::nullopt;
    }
  };
  r.F0_binomial = attempt("F0_binomial", [&] { return F0_main(f, omega, d); });
  r.interaction_energy = attempt("interaction_energy", [&] { return interaction_energy(f, omega, d); });
  if (const auto* ind = std::get_if<IndicatorF>(&f.node()))
    r.perimeter_limit = attempt("perimeter_limit", [&] { return perimeter_limit(ind->region, omega, d); });
  r.critical_alpha = attempt("critical_alpha", [&] { return critical_alpha(f, omega, d, spec); });
  if (r.F0_binomial && r.interaction_energy)
    r.consistency_deltas.push_back({"F0_binomial-interaction_energy", std::abs(*r.F0_binomial - *r.interaction_energy)});
  if (r.F0_binomial && r.perimeter_limit)
    r.consistency_deltas.push_back({"F0_binomial-perimeter_limit", std::abs(*r.F0_binomial - *r.perimeter_limit)});
  if (r.F0_binomial && r.critical_alpha)
    r.consistency_deltas.push_back({"F0_binomial-critical_alpha", std::abs(*r.F0_binomial - *r.critical_alpha)});
  return r;
}

}  // namespace fracms
