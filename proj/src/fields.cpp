#include "fracms/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracms {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

bool poly_is_constant(const PolynomialF& p, double* value) {
  double c = 0.0;
  for (const Monomial& m : p.terms) {
    if (m.exps[0] + m.exps[1] + m.exps[2] == 0) {
      c += m.coef;
    } else if (m.coef != 0.0) {
      return false;
    }
  }
  if (value) *value = c;
  return true;
}

double radial_phi(const RadialAngularF& ra, double r) {
  return ra.profile == RadialProfile::exp ? std::exp(-ra.rate * r) : std::pow(1.0 + r, -ra.rate);
}

double periodic_eval(const Periodic1DF& p, double y) {
  double t = y - std::floor(y / p.period) * p.period;
  if (t >= p.period) t = 0.0;
  const auto it = std::upper_bound(p.breaks.begin(), p.breaks.end(), t);
  std::size_t i = static_cast<std::size_t>(it - p.breaks.begin());
  i = i == 0 ? 0 : i - 1;
  if (i >= p.values.size()) i = p.values.size() - 1;
  return p.values[i];
}

double mid_ln(double la, double lb) {
  if (std::isinf(la) && std::isinf(lb)) return 0.0;
  if (std::isinf(la)) return lb - 1.0;
  if (std::isinf(lb)) return la + 1.0;
  return 0.5 * (la + lb);
}

Periodic1DF map_profile(const Periodic1DF& p, double (*g)(double, int), int k) {
  Periodic1DF q = p;
  for (double& v : q.values) v = g(v, k);
  return q;
}

double mean_of(const Periodic1DF& p) {
  double m = 0.0;
  for (std::size_t i = 0; i < p.values.size(); ++i) m += p.values[i] * (p.breaks[i + 1] - p.breaks[i]);
  return m / p.period;
}

const Field& only(const std::vector<Field>& v) { return v.front(); }

AngularLimit angular_map(const AngularLimit& a, std::function<double(double)> g) {
  AngularLimit out;
  auto f = a.u_inf.f;
  out.u_inf.f = [f, g](const Vec& t) { return g(f(t)); };
  out.u_inf.breaks = a.u_inf.breaks;
  out.radius_estimate = a.radius_estimate;
  return out;
}

}  // namespace

std::string tail_kind_name(const TailModel& t) {
  return std::visit(overloaded{
                        [](const CompactSupport&) { return std::string("compact_support"); },
                        [](const AngularLimit&) { return std::string("angular_limit"); },
                        [](const PeriodicMean&) { return std::string("periodic_mean"); },
                        [](const UnknownTail&) { return std::string("unknown"); },
                    },
                    t);
}

double eval_polynomial(const PolynomialF& p, const Vec& y) {
  double s = 0.0;
  for (const Monomial& m : p.terms) s += m.coef * ipow(y[0], m.exps[0]) * ipow(y[1], m.exps[1]) * ipow(y[2], m.exps[2]);
  return s;
}

Field::Field(Dim d, FieldNode node) : d_(d), node_(std::make_shared<const FieldNode>(std::move(node))) {}

double Field::eval(std::span<const double> y) const { return eval(to_vec(y, d_)); }

double Field::eval(const Vec& y) const {
  return std::visit(
      overloaded{
          [&](const ConstantF& c) { return c.c; },
          [&](const IndicatorF& i) { return i.region.contains(y) ? 1.0 : 0.0; },
          [&](const PolynomialF& p) { return eval_polynomial(p, y); },
          [&](const RadialAngularF& ra) {
            const double r = norm(y);
            const Vec th = r > 0.0 ? (1.0 / r) * y : Vec{1.0, 0.0, 0.0};
            return eval_polynomial(ra.a, th) + eval_polynomial(ra.b, th) * radial_phi(ra, r);
          },
          [&](const Periodic1DF& p) { return periodic_eval(p, y[0]); },
          [&](const ShiftF& s) { return only(s.child).eval(y - s.offset); },
          [&](const SumF& s) {
            double v = 0.0;
            for (const Field& c : s.children) v += c.eval(y);
            return v;
          },
          [&](const ProductF& s) {
            double v = 1.0;
            for (const Field& c : s.children) {
              const double cv = c.eval(y);
              if (cv == 0.0) return 0.0;
              v *= cv;
            }
            return v;
          },
          [&](const ScaleF& s) { return s.c * only(s.child).eval(y); },
          [&](const PosPartF& s) { return std::max(only(s.child).eval(y), 0.0); },
          [&](const NegPartF& s) { return std::max(-only(s.child).eval(y), 0.0); },
          [&](const PowerF& s) { return ipow(only(s.child).eval(y), s.k); },
      },
      *node_);
}

double Field::eval_far(const Vec& dir, double ln_r) const {
  return std::visit(
      overloaded{
          [&](const ConstantF& c) { return c.c; },
          [&](const IndicatorF& i) { return i.region.contains_far(dir, ln_r) ? 1.0 : 0.0; },
          [&](const PolynomialF& p) {
            double c;
            return poly_is_constant(p, &c) ? c : kNaN;
          },
          [&](const RadialAngularF& ra) { return eval_polynomial(ra.a, dir); },
          [&](const Periodic1DF&) { return kNaN; },
          [&](const ShiftF& s) { return only(s.child).eval_far(dir, ln_r); },
          [&](const SumF& s) {
            double v = 0.0;
            for (const Field& c : s.children) v += c.eval_far(dir, ln_r);
            return v;
          },
          [&](const ProductF& s) {
            double v = 1.0;
            for (const Field& c : s.children) {
              const double cv = c.eval_far(dir, ln_r);
              if (cv == 0.0) return 0.0;
              v *= cv;
            }
            return v;
          },
          [&](const ScaleF& s) { return s.c * only(s.child).eval_far(dir, ln_r); },
          [&](const PosPartF& s) {
            const double v = only(s.child).eval_far(dir, ln_r);
            return std::isnan(v) ? v : std::max(v, 0.0);
          },
          [&](const NegPartF& s) {
            const double v = only(s.child).eval_far(dir, ln_r);
            return std::isnan(v) ? v : std::max(-v, 0.0);
          },
          [&](const PowerF& s) { return ipow(only(s.child).eval_far(dir, ln_r), s.k); },
      },
      *node_);
}

double Field::eval_at(const Vec& o, const Vec& dir, double ln_r) const {
  if (ln_r < kLnFar) return eval(o + std::exp(ln_r) * dir);
  return eval_far(dir, ln_r);
}

void Field::ray_breaks(const Vec& o, const Vec& dir, double ln_cap, std::vector<double>& out) const {
  std::visit(overloaded{
                 [&](const IndicatorF& i) { i.region.ray_breaks(o, dir, ln_cap, out); },
                 [&](const RadialAngularF&) {
                   // Closest approach to the origin, where the angular part varies fastest.
                   const double r = -dot(o, dir);
                   if (r > 0.0 && std::log(r) < ln_cap) out.push_back(std::log(r));
                 },
                 [&](const Periodic1DF& p) {
                   if (ln_cap > 40.0) throw std::runtime_error("periodic field: ray too long for explicit breaks");
                   const double rmax = std::exp(ln_cap);
                   const double per = static_cast<double>(p.breaks.size() - 1);
                   if (rmax / p.period * per > 2e6)
                     throw std::runtime_error("periodic field: too many breaks along ray");
                   // y = o + r dir with dir = +-1.
                   const double y0 = o[0], y1 = o[0] + rmax * dir[0];
                   const double lo = std::min(y0, y1), hi = std::max(y0, y1);
                   for (double k = std::floor(lo / p.period); k * p.period <= hi; k += 1.0) {
                     for (std::size_t i = 0; i + 1 < p.breaks.size(); ++i) {
                       const double y = k * p.period + p.breaks[i];
                       const double r = (y - o[0]) / dir[0];
                       if (r > 0.0 && r < rmax) out.push_back(std::log(r));
                     }
                   }
                 },
                 [&](const ShiftF& s) { only(s.child).ray_breaks(o - s.offset, dir, ln_cap, out); },
                 [&](const SumF& s) {
                   for (const Field& c : s.children) c.ray_breaks(o, dir, ln_cap, out);
                 },
                 [&](const ProductF& s) {
                   for (const Field& c : s.children) c.ray_breaks(o, dir, ln_cap, out);
                 },
                 [&](const ScaleF& s) { only(s.child).ray_breaks(o, dir, ln_cap, out); },
                 [&](const PosPartF& s) { only(s.child).ray_breaks(o, dir, ln_cap, out); },
                 [&](const NegPartF& s) { only(s.child).ray_breaks(o, dir, ln_cap, out); },
                 [&](const PowerF& s) { only(s.child).ray_breaks(o, dir, ln_cap, out); },
                 [](const auto&) {},
             },
             *node_);
}

void Field::angular_breaks(std::vector<double>& out) const {
  std::visit(overloaded{
                 [&](const IndicatorF& i) { i.region.angular_breaks(out); },
                 [&](const ShiftF& s) { only(s.child).angular_breaks(out); },
                 [&](const SumF& s) {
                   for (const Field& c : s.children) c.angular_breaks(out);
                 },
                 [&](const ProductF& s) {
                   for (const Field& c : s.children) c.angular_breaks(out);
                 },
                 [&](const ScaleF& s) { only(s.child).angular_breaks(out); },
                 [&](const PosPartF& s) { only(s.child).angular_breaks(out); },
                 [&](const NegPartF& s) { only(s.child).angular_breaks(out); },
                 [&](const PowerF& s) { only(s.child).angular_breaks(out); },
                 [](const auto&) {},
             },
             *node_);
}

std::optional<double> Field::constant_on(const Vec& o, const Vec& dir, double la, double lb) const {
  using R = std::optional<double>;
  return std::visit(
      overloaded{
          [&](const ConstantF& c) -> R { return c.c; },
          [&](const IndicatorF& i) -> R { return i.region.contains_at(o, dir, mid_ln(la, lb)) ? 1.0 : 0.0; },
          [&](const PolynomialF& p) -> R {
            double c;
            if (poly_is_constant(p, &c)) return c;
            return std::nullopt;
          },
          [&](const RadialAngularF&) -> R { return std::nullopt; },
          [&](const Periodic1DF& p) -> R {
            if (std::isinf(la) || std::isinf(lb) || lb >= kLnFar) return std::nullopt;
            return periodic_eval(p, o[0] + std::exp(mid_ln(la, lb)) * dir[0]);
          },
          [&](const ShiftF& s) -> R { return only(s.child).constant_on(o - s.offset, dir, la, lb); },
          [&](const SumF& s) -> R {
            double v = 0.0;
            for (const Field& c : s.children) {
              const R cv = c.constant_on(o, dir, la, lb);
              if (!cv) return std::nullopt;
              v += *cv;
            }
            return v;
          },
          [&](const ProductF& s) -> R {
            double v = 1.0;
            bool all = true;
            for (const Field& c : s.children) {
              const R cv = c.constant_on(o, dir, la, lb);
              if (cv && *cv == 0.0) return 0.0;
              if (!cv) {
                all = false;
              } else {
                v *= *cv;
              }
            }
            if (!all) return std::nullopt;
            return v;
          },
          [&](const ScaleF& s) -> R {
            const R v = only(s.child).constant_on(o, dir, la, lb);
            if (!v) return std::nullopt;
            return s.c * *v;
          },
          [&](const PosPartF& s) -> R {
            const R v = only(s.child).constant_on(o, dir, la, lb);
            if (!v) return std::nullopt;
            return std::max(*v, 0.0);
          },
          [&](const NegPartF& s) -> R {
            const R v = only(s.child).constant_on(o, dir, la, lb);
            if (!v) return std::nullopt;
            return std::max(-*v, 0.0);
          },
          [&](const PowerF& s) -> R {
            const R v = only(s.child).constant_on(o, dir, la, lb);
            if (!v) return std::nullopt;
            return ipow(*v, s.k);
          },
      },
      *node_);
}

TailModel Field::tail_model() const {
  return std::visit(
      overloaded{
          [&](const ConstantF& c) -> TailModel { return AngularLimit{constant_angular(c.c), 0.0}; },
          [&](const IndicatorF& i) -> TailModel {
            switch (i.region.far_kind()) {
              case FarKind::bounded: return CompactSupport{*i.region.bounding_radius()};
              case FarKind::angular: {
                AngularLimit a;
                const Region reg = i.region;
                a.u_inf.f = [reg](const Vec& t) { return reg.contains_far(t, 2.0 * kLnFar) ? 1.0 : 0.0; };
                reg.angular_breaks(a.u_inf.breaks);
                a.radius_estimate = reg.bounding_radius().value_or(0.0);
                return a;
              }
              case FarKind::unknown: return UnknownTail{};
            }
            return UnknownTail{};
          },
          [&](const PolynomialF& p) -> TailModel {
            double c;
            if (poly_is_constant(p, &c)) return AngularLimit{constant_angular(c), 0.0};
            return UnknownTail{};
          },
          [&](const RadialAngularF& ra) -> TailModel {
            AngularLimit a;
            const PolynomialF pa = ra.a;
            a.u_inf.f = [pa](const Vec& t) { return eval_polynomial(pa, t); };
            a.radius_estimate = ra.profile == RadialProfile::exp ? 36.0 / ra.rate : std::exp(36.0 / ra.rate);
            return a;
          },
          [&](const Periodic1DF& p) -> TailModel { return PeriodicMean{mean_of(p)}; },
          [&](const ShiftF& s) -> TailModel {
            TailModel t = only(s.child).tail_model();
            if (auto* cs = std::get_if<CompactSupport>(&t)) cs->radius += norm(s.offset);
            return t;
          },
          [&](const SumF& s) -> TailModel {
            std::vector<TailModel> ts;
            for (const Field& c : s.children) ts.push_back(c.tail_model());
            bool all_compact = true, any_unknown = false;
            int periodic = 0;
            double radius = 0.0, pmean = 0.0;
            for (const TailModel& t : ts) {
              if (const auto* cs = std::get_if<CompactSupport>(&t)) {
                radius = std::max(radius, cs->radius);
                continue;
              }
              all_compact = false;
              if (std::holds_alternative<UnknownTail>(t)) any_unknown = true;
              if (const auto* pm = std::get_if<PeriodicMean>(&t)) {
                ++periodic;
                pmean += pm->mean;
              }
            }
            if (all_compact) return CompactSupport{radius};
            if (any_unknown) return UnknownTail{};
            if (periodic > 0) {
              if (static_cast<std::size_t>(periodic) + std::count_if(ts.begin(), ts.end(), [](const TailModel& t) {
                                                            return std::holds_alternative<CompactSupport>(t);
                                                          }) ==
                  ts.size())
                return PeriodicMean{pmean};
              return UnknownTail{};
            }
            AngularLimit out;
            std::vector<std::function<double(const Vec&)>> fs;
            for (const TailModel& t : ts) {
              if (const auto* a = std::get_if<AngularLimit>(&t)) {
                fs.push_back(a->u_inf.f);
                out.u_inf.breaks.insert(out.u_inf.breaks.end(), a->u_inf.breaks.begin(), a->u_inf.breaks.end());
                out.radius_estimate = std::max(out.radius_estimate, a->radius_estimate);
              }
            }
            out.radius_estimate = std::max(out.radius_estimate, radius);
            out.u_inf.f = [fs](const Vec& t) {
              double v = 0.0;
              for (const auto& f : fs) v += f(t);
              return v;
            };
            return out;
          },
          [&](const ProductF& s) -> TailModel {
            std::vector<TailModel> ts;
            for (const Field& c : s.children) ts.push_back(c.tail_model());
            double radius = std::numeric_limits<double>::infinity();
            for (const TailModel& t : ts)
              if (const auto* cs = std::get_if<CompactSupport>(&t)) radius = std::min(radius, cs->radius);
            if (std::isfinite(radius)) return CompactSupport{radius};
            AngularLimit out;
            std::vector<std::function<double(const Vec&)>> fs;
            for (const TailModel& t : ts) {
              const auto* a = std::get_if<AngularLimit>(&t);
              if (!a) return UnknownTail{};
              fs.push_back(a->u_inf.f);
              out.u_inf.breaks.insert(out.u_inf.breaks.end(), a->u_inf.breaks.begin(), a->u_inf.breaks.end());
              out.radius_estimate = std::max(out.radius_estimate, a->radius_estimate);
            }
            out.u_inf.f = [fs](const Vec& t) {
              double v = 1.0;
              for (const auto& f : fs) v *= f(t);
              return v;
            };
            return out;
          },
          [&](const ScaleF& s) -> TailModel {
            TailModel t = only(s.child).tail_model();
            const double c = s.c;
            if (auto* a = std::get_if<AngularLimit>(&t)) return angular_map(*a, [c](double v) { return c * v; });
            if (auto* pm = std::get_if<PeriodicMean>(&t)) return PeriodicMean{c * pm->mean};
            return t;
          },
          [&](const PosPartF& s) -> TailModel {
            const Field& ch = only(s.child);
            TailModel t = ch.tail_model();
            if (auto* a = std::get_if<AngularLimit>(&t)) return angular_map(*a, [](double v) { return std::max(v, 0.0); });
            if (std::holds_alternative<PeriodicMean>(t)) {
              if (const auto* p = std::get_if<Periodic1DF>(&ch.node()))
                return PeriodicMean{mean_of(map_profile(*p, [](double v, int) { return std::max(v, 0.0); }, 0))};
              return UnknownTail{};
            }
            return t;
          },
          [&](const NegPartF& s) -> TailModel {
            const Field& ch = only(s.child);
            TailModel t = ch.tail_model();
            if (auto* a = std::get_if<AngularLimit>(&t)) return angular_map(*a, [](double v) { return std::max(-v, 0.0); });
            if (std::holds_alternative<PeriodicMean>(t)) {
              if (const auto* p = std::get_if<Periodic1DF>(&ch.node()))
                return PeriodicMean{mean_of(map_profile(*p, [](double v, int) { return std::max(-v, 0.0); }, 0))};
              return UnknownTail{};
            }
            return t;
          },
          [&](const PowerF& s) -> TailModel {
            const Field& ch = only(s.child);
            TailModel t = ch.tail_model();
            const int k = s.k;
            if (auto* a = std::get_if<AngularLimit>(&t)) return angular_map(*a, [k](double v) { return ipow(v, k); });
            if (std::holds_alternative<PeriodicMean>(t)) {
              if (const auto* p = std::get_if<Periodic1DF>(&ch.node()))
                return PeriodicMean{mean_of(map_profile(*p, ipow, k))};
              return UnknownTail{};
            }
            return t;
          },
      },
      *node_);
}

bool Field::has_jumps() const {
  return std::visit(overloaded{
                        [](const IndicatorF&) { return true; },
                        [](const Periodic1DF&) { return true; },
                        [](const ShiftF& s) { return only(s.child).has_jumps(); },
                        [](const SumF& s) {
                          return std::any_of(s.children.begin(), s.children.end(),
                                             [](const Field& c) { return c.has_jumps(); });
                        },
                        [](const ProductF& s) {
                          return std::any_of(s.children.begin(), s.children.end(),
                                             [](const Field& c) { return c.has_jumps(); });
                        },
                        [](const ScaleF& s) { return only(s.child).has_jumps(); },
                        [](const PosPartF& s) { return only(s.child).has_jumps(); },
                        [](const NegPartF& s) { return only(s.child).has_jumps(); },
                        [](const PowerF& s) { return only(s.child).has_jumps(); },
                        [](const auto&) { return false; },
                    },
                    *node_);
}

namespace {
bool any_child(const FieldNode& n, bool (Field::*pred)() const) {
  return std::visit(overloaded{
                        [&](const ShiftF& s) { return (only(s.child).*pred)(); },
                        [&](const SumF& s) {
                          return std::any_of(s.children.begin(), s.children.end(),
                                             [&](const Field& c) { return (c.*pred)(); });
                        },
                        [&](const ProductF& s) {
                          return std::any_of(s.children.begin(), s.children.end(),
                                             [&](const Field& c) { return (c.*pred)(); });
                        },
                        [&](const ScaleF& s) { return (only(s.child).*pred)(); },
                        [&](const PosPartF& s) { return (only(s.child).*pred)(); },
                        [&](const NegPartF& s) { return (only(s.child).*pred)(); },
                        [&](const PowerF& s) { return (only(s.child).*pred)(); },
                        [](const auto&) { return false; },
                    },
                    n);
}
}  // namespace

bool Field::has_unbounded_breaks() const {
  if (const auto* i = std::get_if<IndicatorF>(node_.get())) return i->region.far_kind() == FarKind::unknown;
  return any_child(*node_, &Field::has_unbounded_breaks);
}

bool Field::has_periodic() const {
  if (std::holds_alternative<Periodic1DF>(*node_)) return true;
  return any_child(*node_, &Field::has_periodic);
}

// ---------------------------------------------------------------------------

Field make_constant(Dim d, double c) { return Field(d, ConstantF{c}); }

Field make_indicator(Region r) {
  const Dim d(r.dim());
  return Field(d, IndicatorF{std::move(r)});
}

namespace {
PolynomialF checked_poly(int d, std::vector<Monomial> terms) {
  for (const Monomial& m : terms) {
    int deg = 0;
    for (int i = 0; i < 3; ++i) {
      if (m.exps[i] < 0) throw std::invalid_argument("polynomial exponents must be >= 0");
      if (i >= d && m.exps[i] != 0) throw std::invalid_argument("polynomial exponent beyond field dimension");
      deg += m.exps[i];
    }
    if (deg > kMaxPolynomialDegree) throw std::invalid_argument("polynomial degree exceeds 4");
  }
  return PolynomialF{std::move(terms)};
}
}  // namespace

Field make_polynomial(Dim d, std::vector<Monomial> terms) { return Field(d, checked_poly(d, std::move(terms))); }

Field make_radial_angular(Dim d, std::vector<Monomial> a, std::vector<Monomial> b, RadialProfile profile,
                          double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("radial profile rate must be > 0");
  return Field(d, RadialAngularF{checked_poly(d, std::move(a)), checked_poly(d, std::move(b)), profile, rate});
}

Field make_periodic(double period, std::vector<double> breaks, std::vector<double> values) {
  if (!(period > 0.0)) throw std::invalid_argument("period must be > 0");
  if (breaks.size() < 2 || values.size() + 1 != breaks.size())
    throw std::invalid_argument("periodic profile needs breaks.size() == values.size() + 1");
  if (breaks.front() != 0.0 || breaks.back() != period)
    throw std::invalid_argument("periodic breaks must start at 0 and end at the period");
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (!(breaks[i] < breaks[i + 1])) throw std::invalid_argument("periodic breaks must increase");
  return Field(Dim(1), Periodic1DF{period, std::move(breaks), std::move(values)});
}

Field make_shift(Field f, std::span<const double> offset) {
  const Dim d(f.dim());
  const Vec v = to_vec(offset, d);
  return Field(d, ShiftF{{std::move(f)}, v});
}

namespace {
Dim common_dim(const std::vector<Field>& fs) {
  if (fs.empty()) throw std::invalid_argument("composite field needs at least one child");
  for (const Field& f : fs)
    if (f.dim() != fs.front().dim()) throw std::invalid_argument("field children must share the dimension");
  return Dim(fs.front().dim());
}
}  // namespace

Field make_sum(std::vector<Field> fs) {
  const Dim d = common_dim(fs);
  return Field(d, SumF{std::move(fs)});
}

Field make_product(std::vector<Field> fs) {
  const Dim d = common_dim(fs);
  return Field(d, ProductF{std::move(fs)});
}

Field make_scale(Field f, double c) {
  const Dim d(f.dim());
  return Field(d, ScaleF{{std::move(f)}, c});
}

Field power(const Field& f, int k) {
  if (k < 0) throw std::invalid_argument("power exponent must be >= 0");
  const Dim d(f.dim());
  if (k == 0) return make_constant(d, 1.0);
  if (k == 1) return f;
  if (const auto* c = std::get_if<ConstantF>(&f.node())) return make_constant(d, ipow(c->c, k));
  if (std::holds_alternative<IndicatorF>(f.node())) return f;
  if (const auto* p = std::get_if<Periodic1DF>(&f.node())) return Field(d, map_profile(*p, ipow, k));
  return Field(d, PowerF{{f}, k});
}

Field pos_part(const Field& f) {
  const Dim d(f.dim());
  if (const auto* c = std::get_if<ConstantF>(&f.node())) return make_constant(d, std::max(c->c, 0.0));
  if (std::holds_alternative<IndicatorF>(f.node())) return f;
  if (const auto* p = std::get_if<Periodic1DF>(&f.node()))
    return Field(d, map_profile(*p, [](double v, int) { return std::max(v, 0.0); }, 0));
  return Field(d, PosPartF{{f}});
}

Field neg_part(const Field& f) {
  const Dim d(f.dim());
  if (const auto* c = std::get_if<ConstantF>(&f.node())) return make_constant(d, std::max(-c->c, 0.0));
  if (std::holds_alternative<IndicatorF>(f.node())) return make_constant(d, 0.0);
  if (const auto* p = std::get_if<Periodic1DF>(&f.node()))
    return Field(d, map_profile(*p, [](double v, int) { return std::max(-v, 0.0); }, 0));
  return Field(d, NegPartF{{f}});
}

}  // namespace fracms
