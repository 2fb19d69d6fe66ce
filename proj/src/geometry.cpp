#include "fracms/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fracms {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

bool in_arc(double phi, const Arc& arc) {
  if (arc.length >= kTwoPi) return true;
  const double start = wrap_angle(arc.start);
  double rel = phi - start;
  if (rel < 0.0) rel += kTwoPi;
  return rel <= arc.length;
}

bool sector_dir(const Sector& s, int d, const Vec& y) {
  const double ny = norm(y);
  if (ny == 0.0) return false;
  if (d == 1) {
    const int sign = y[0] > 0.0 ? 1 : -1;
    return std::find(s.signs.begin(), s.signs.end(), sign) != s.signs.end();
  }
  if (d == 2) {
    const double phi = wrap_angle(std::atan2(y[1], y[0]));
    for (const Arc& a : s.arcs)
      if (in_arc(phi, a)) return true;
    return false;
  }
  for (const Cap& c : s.caps)
    if (dot(c.axis, y) >= std::cos(c.half_angle) * ny) return true;
  return false;
}

// Boundary values of ln rho for shells, in increasing order, up to ln_cap.
template <class F>
void for_each_shell_boundary(const RadialShells& sh, double ln_cap, F&& f) {
  if (sh.pattern == ShellPattern::log_dyadic) {
    for (double b = sh.scale; b < ln_cap; b *= 2.0) f(b);
  } else {
    const double base = std::log(sh.scale);
    constexpr std::size_t kMaxShellBreaks = 4'000'000;
    std::size_t j = 0;
    for (double b = base; b < ln_cap; b = base + (++j) * std::numbers::ln2) {
      if (j > kMaxShellBreaks) throw std::runtime_error("radial shells: too many boundaries along ray");
      f(b);
    }
  }
}

bool shells_ln(const RadialShells& sh, double ln_rho) {
  if (sh.pattern == ShellPattern::log_dyadic) {
    if (ln_rho < sh.scale) return false;
    const double q = std::log2(ln_rho / sh.scale);  // in [2k, 2k+1) inside
    return std::fmod(std::floor(q), 2.0) == 0.0;
  }
  const double q = (ln_rho - std::log(sh.scale)) / std::numbers::ln2;
  if (q < 0.0) return false;
  return std::fmod(std::floor(q), 2.0) == 0.0;
}

void push_positive(double r, double ln_cap, std::vector<double>& out) {
  if (r > 0.0 && std::isfinite(r)) {
    const double l = std::log(r);
    if (l < ln_cap) out.push_back(l);
  }
}

// Positive roots of |o + r dir - c|^2 = rho^2.
void sphere_crossings(const Vec& o, const Vec& dir, const Vec& c, double rho, double ln_cap,
                      std::vector<double>& out) {
  const Vec w = o - c;
  const double b = dot(dir, w);
  const double cc = dot(w, w) - rho * rho;
  const double disc = b * b - cc;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  // Stable pair of roots.
  const double q = -b - std::copysign(sq, b);
  if (q != 0.0) {
    push_positive(q, ln_cap, out);
    push_positive(cc / q, ln_cap, out);
  } else {
    push_positive(sq, ln_cap, out);
  }
}

void quadratic_roots(double a, double b, double c, double ln_cap, std::vector<double>& out) {
  // a r^2 + 2 b r + c = 0
  if (std::abs(a) < 1e-300) {
    if (b != 0.0) push_positive(-c / (2.0 * b), ln_cap, out);
    return;
  }
  const double disc = b * b - a * c;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  const double q = -b - std::copysign(sq, b);
  if (q != 0.0) {
    push_positive(q / a, ln_cap, out);
    push_positive(c / q, ln_cap, out);
  } else {
    push_positive(0.0, ln_cap, out);
  }
}

int node_depth(const RegionNode& n) {
  auto children_depth = [](const std::vector<Region>& cs) {
    int m = 0;
    for (const Region& c : cs) m = std::max(m, c.depth());
    return m + 1;
  };
  return std::visit(overloaded{
                        [&](const Complement& c) { return children_depth(c.child); },
                        [&](const Union& u) { return children_depth(u.children); },
                        [&](const Intersection& u) { return children_depth(u.children); },
                        [&](const Translate& t) { return children_depth(t.child); },
                        [](const auto&) { return 0; },
                    },
                    n);
}

double sphere_area(int d) { return d == 1 ? 2.0 : d == 2 ? kTwoPi : 2.0 * kTwoPi; }

}  // namespace

Region::Region(Dim d, RegionNode node)
    : d_(d), depth_(node_depth(node)), node_(std::make_shared<const RegionNode>(std::move(node))) {
  if (depth_ > kMaxRegionDepth)
    throw std::invalid_argument("region nesting depth exceeds " + std::to_string(kMaxRegionDepth));
  auto check_children = [&](const std::vector<Region>& cs) {
    for (const Region& c : cs)
      if (c.dim() != d_) throw std::invalid_argument("region children must share the dimension");
  };
  std::visit(overloaded{
                 [&](const Complement& c) { check_children(c.child); },
                 [&](const Union& u) { check_children(u.children); },
                 [&](const Intersection& u) { check_children(u.children); },
                 [&](const Translate& t) { check_children(t.child); },
                 [](const auto&) {},
             },
             *node_);
}

bool Region::contains(std::span<const double> y) const { return contains(to_vec(y, d_)); }

bool Region::contains(const Vec& y) const {
  const int d = d_;
  return std::visit(
      overloaded{
          [&](const Ball& b) { return dot(y - b.center, y - b.center) < b.radius * b.radius; },
          [&](const Box& b) {
            for (int i = 0; i < d; ++i)
              if (y[i] < b.lo[i] || y[i] >= b.hi[i]) return false;
            return true;
          },
          [&](const HalfSpace& h) { return dot(y, h.normal) >= h.offset; },
          [&](const Sector& s) { return sector_dir(s, d, y); },
          [&](const RadialShells& sh) {
            const double n = norm(y);
            return n > 0.0 && shells_ln(sh, std::log(n));
          },
          [&](const Complement& c) { return !c.child[0].contains(y); },
          [&](const Union& u) {
            for (const Region& c : u.children)
              if (c.contains(y)) return true;
            return false;
          },
          [&](const Intersection& u) {
            for (const Region& c : u.children)
              if (!c.contains(y)) return false;
            return true;
          },
          [&](const Translate& t) { return t.child[0].contains(y - t.offset); },
      },
      *node_);
}

bool Region::contains_far(const Vec& dir, double ln_r) const {
  const int d = d_;
  return std::visit(overloaded{
                        [&](const Ball&) { return false; },
                        [&](const Box&) { return false; },
                        [&](const HalfSpace& h) {
                          const double c = dot(dir, h.normal);
                          return c > 0.0 || (c == 0.0 && 0.0 >= h.offset);
                        },
                        [&](const Sector& s) { return sector_dir(s, d, dir); },
                        [&](const RadialShells& sh) { return shells_ln(sh, ln_r); },
                        [&](const Complement& c) { return !c.child[0].contains_far(dir, ln_r); },
                        [&](const Union& u) {
                          for (const Region& c : u.children)
                            if (c.contains_far(dir, ln_r)) return true;
                          return false;
                        },
                        [&](const Intersection& u) {
                          for (const Region& c : u.children)
                            if (!c.contains_far(dir, ln_r)) return false;
                          return true;
                        },
                        [&](const Translate& t) { return t.child[0].contains_far(dir, ln_r); },
                    },
                    *node_);
}

bool Region::contains_at(const Vec& o, const Vec& dir, double ln_r) const {
  if (ln_r < kLnFar) return contains(o + std::exp(ln_r) * dir);
  return contains_far(dir, ln_r);
}

void Region::ray_breaks(const Vec& o, const Vec& dir, double ln_cap, std::vector<double>& out) const {
  const int d = d_;
  std::visit(
      overloaded{
          [&](const Ball& b) { sphere_crossings(o, dir, b.center, b.radius, ln_cap, out); },
          [&](const Box& b) {
            for (int i = 0; i < d; ++i) {
              if (dir[i] == 0.0) continue;
              push_positive((b.lo[i] - o[i]) / dir[i], ln_cap, out);
              push_positive((b.hi[i] - o[i]) / dir[i], ln_cap, out);
            }
          },
          [&](const HalfSpace& h) {
            const double c = dot(dir, h.normal);
            if (c != 0.0) push_positive((h.offset - dot(o, h.normal)) / c, ln_cap, out);
          },
          [&](const Sector& s) {
            // Passing the apex.
            push_positive(-dot(o, dir), ln_cap, out);
            if (d == 2) {
              for (const Arc& a : s.arcs) {
                if (a.length >= kTwoPi) continue;
                for (double ang : {a.start, a.start + a.length}) {
                  const double ex = std::cos(ang), ey = std::sin(ang);
                  const double cd = dir[0] * ey - dir[1] * ex;
                  if (cd != 0.0) push_positive(-(o[0] * ey - o[1] * ex) / cd, ln_cap, out);
                }
              }
            } else if (d == 3) {
              for (const Cap& c : s.caps) {
                const double cs = std::cos(c.half_angle);
                const double A = dot(c.axis, dir), B = dot(c.axis, o);
                quadratic_roots(A * A - cs * cs, A * B - cs * cs * dot(o, dir), B * B - cs * cs * dot(o, o),
                                ln_cap, out);
              }
            }
          },
          [&](const RadialShells& sh) {
            const Vec zero{0.0, 0.0, 0.0};
            for_each_shell_boundary(sh, ln_cap, [&](double lb) {
              if (lb < kLnFar) {
                sphere_crossings(o, dir, zero, std::exp(lb), ln_cap, out);
              } else {
                out.push_back(lb);
              }
            });
          },
          [&](const Complement& c) { c.child[0].ray_breaks(o, dir, ln_cap, out); },
          [&](const Union& u) {
            for (const Region& c : u.children) c.ray_breaks(o, dir, ln_cap, out);
          },
          [&](const Intersection& u) {
            for (const Region& c : u.children) c.ray_breaks(o, dir, ln_cap, out);
          },
          [&](const Translate& t) { t.child[0].ray_breaks(o - t.offset, dir, ln_cap, out); },
      },
      *node_);
}

void Region::angular_breaks(std::vector<double>& out) const {
  if (d_ != 2) return;
  std::visit(overloaded{
                 [&](const HalfSpace& h) {
                   const double phi = std::atan2(h.normal[1], h.normal[0]);
                   out.push_back(wrap_angle(phi + 0.5 * kPi));
                   out.push_back(wrap_angle(phi - 0.5 * kPi));
                 },
                 [&](const Sector& s) {
                   for (const Arc& a : s.arcs) {
                     if (a.length >= kTwoPi) continue;
                     out.push_back(wrap_angle(a.start));
                     out.push_back(wrap_angle(a.start + a.length));
                   }
                 },
                 [&](const Complement& c) { c.child[0].angular_breaks(out); },
                 [&](const Union& u) {
                   for (const Region& c : u.children) c.angular_breaks(out);
                 },
                 [&](const Intersection& u) {
                   for (const Region& c : u.children) c.angular_breaks(out);
                 },
                 [&](const Translate& t) { t.child[0].angular_breaks(out); },
                 [](const auto&) {},
             },
             *node_);
}

FarKind Region::far_kind() const {
  return std::visit(overloaded{
                        [](const Ball&) { return FarKind::bounded; },
                        [](const Box&) { return FarKind::bounded; },
                        [](const HalfSpace&) { return FarKind::angular; },
                        [](const Sector&) { return FarKind::angular; },
                        [](const RadialShells&) { return FarKind::unknown; },
                        [](const Complement& c) {
                          const FarKind k = c.child[0].far_kind();
                          return k == FarKind::unknown ? FarKind::unknown : FarKind::angular;
                        },
                        [](const Union& u) {
                          FarKind k = FarKind::bounded;
                          for (const Region& c : u.children) {
                            const FarKind ck = c.far_kind();
                            if (ck == FarKind::unknown) return FarKind::unknown;
                            if (ck == FarKind::angular) k = FarKind::angular;
                          }
                          return k;
                        },
                        [](const Intersection& u) {
                          FarKind k = FarKind::angular;
                          for (const Region& c : u.children) {
                            const FarKind ck = c.far_kind();
                            if (ck == FarKind::bounded) return FarKind::bounded;
                            if (ck == FarKind::unknown) k = FarKind::unknown;
                          }
                          return k;
                        },
                        [](const Translate& t) { return t.child[0].far_kind(); },
                    },
                    *node_);
}

std::optional<std::pair<Vec, Vec>> Region::bounding_box() const {
  using BB = std::optional<std::pair<Vec, Vec>>;
  const int d = d_;
  return std::visit(overloaded{
                        [&](const Ball& b) -> BB {
                          Vec lo{}, hi{};
                          for (int i = 0; i < d; ++i) {
                            lo[i] = b.center[i] - b.radius;
                            hi[i] = b.center[i] + b.radius;
                          }
                          return std::make_pair(lo, hi);
                        },
                        [&](const Box& b) -> BB { return std::make_pair(b.lo, b.hi); },
                        [&](const Translate& t) -> BB {
                          auto bb = t.child[0].bounding_box();
                          if (!bb) return std::nullopt;
                          return std::make_pair(bb->first + t.offset, bb->second + t.offset);
                        },
                        [&](const Union& u) -> BB {
                          BB acc;
                          for (const Region& c : u.children) {
                            auto bb = c.bounding_box();
                            if (!bb) return std::nullopt;
                            if (!acc) {
                              acc = bb;
                              continue;
                            }
                            for (int i = 0; i < d; ++i) {
                              acc->first[i] = std::min(acc->first[i], bb->first[i]);
                              acc->second[i] = std::max(acc->second[i], bb->second[i]);
                            }
                          }
                          return acc;
                        },
                        [&](const Intersection& u) -> BB {
                          BB acc;
                          for (const Region& c : u.children) {
                            auto bb = c.bounding_box();
                            if (!bb) continue;
                            if (!acc) {
                              acc = bb;
                              continue;
                            }
                            for (int i = 0; i < d; ++i) {
                              acc->first[i] = std::max(acc->first[i], bb->first[i]);
                              acc->second[i] = std::min(acc->second[i], bb->second[i]);
                            }
                          }
                          if (acc) {
                            for (int i = 0; i < d; ++i)
                              if (acc->second[i] < acc->first[i]) acc->second[i] = acc->first[i];
                          }
                          return acc;
                        },
                        [](const auto&) -> BB { return std::nullopt; },
                    },
                    *node_);
}

std::optional<double> Region::bounding_radius() const {
  if (const auto* b = std::get_if<Ball>(&node())) return norm(b->center) + b->radius;
  if (const auto* in = std::get_if<Intersection>(&node())) {
    std::optional<double> best;
    for (const Region& c : in->children)
      if (auto r = c.bounding_radius(); r && (!best || *r < *best)) best = r;
    if (best) return best;
  }
  const auto bb = bounding_box();
  if (!bb) return std::nullopt;
  double r2 = 0.0;
  for (int i = 0; i < d_; ++i) {
    const double m = std::max(std::abs(bb->first[i]), std::abs(bb->second[i]));
    r2 += m * m;
  }
  return std::sqrt(r2);
}

double Region::boundary_distance_lb(const Vec& y) const {
  const int d = d_;
  return std::visit(
      overloaded{
          [&](const Ball& b) { return std::abs(norm(y - b.center) - b.radius); },
          [&](const Box& b) {
            bool inside = true;
            double in_d = std::numeric_limits<double>::infinity();
            double out2 = 0.0;
            for (int i = 0; i < d; ++i) {
              if (y[i] < b.lo[i]) {
                inside = false;
                out2 += (b.lo[i] - y[i]) * (b.lo[i] - y[i]);
              } else if (y[i] > b.hi[i]) {
                inside = false;
                out2 += (y[i] - b.hi[i]) * (y[i] - b.hi[i]);
              } else {
                in_d = std::min({in_d, y[i] - b.lo[i], b.hi[i] - y[i]});
              }
            }
            return inside ? in_d : std::sqrt(out2);
          },
          [&](const HalfSpace& h) { return std::abs(dot(y, h.normal) - h.offset); },
          [&](const Sector& s) {
            const double ny = norm(y);
            if (d == 1) return ny;
            double best = std::numeric_limits<double>::infinity();
            if (d == 2) {
              for (const Arc& a : s.arcs) {
                if (a.length >= kTwoPi) continue;
                for (double ang : {a.start, a.start + a.length}) {
                  const Vec e{std::cos(ang), std::sin(ang), 0.0};
                  const double along = dot(y, e);
                  best = std::min(best, along >= 0.0 ? std::abs(y[0] * e[1] - y[1] * e[0]) : ny);
                }
              }
            } else {
              for (const Cap& c : s.caps) {
                if (c.half_angle >= kPi) continue;
                if (ny == 0.0) return 0.0;
                const double phi = std::acos(std::clamp(dot(y, c.axis) / ny, -1.0, 1.0));
                const double gap = std::abs(phi - c.half_angle);
                best = std::min(best, gap >= 0.5 * kPi ? ny : ny * std::sin(gap));
              }
            }
            return best;
          },
          [&](const RadialShells& sh) {
            const double ny = norm(y);
            double best = std::numeric_limits<double>::infinity();
            const double cap = ny > 0.0 ? std::log(ny) + 1.0 : 0.0;
            for_each_shell_boundary(sh, std::max(cap, 1.0) * 2.0 + 1.0, [&](double lb) {
              if (lb < 700.0) best = std::min(best, std::abs(ny - std::exp(lb)));
            });
            return best;
          },
          [&](const Complement& c) { return c.child[0].boundary_distance_lb(y); },
          [&](const Union& u) {
            double m = std::numeric_limits<double>::infinity();
            for (const Region& c : u.children) m = std::min(m, c.boundary_distance_lb(y));
            return m;
          },
          [&](const Intersection& u) {
            double m = std::numeric_limits<double>::infinity();
            for (const Region& c : u.children) m = std::min(m, c.boundary_distance_lb(y));
            return m;
          },
          [&](const Translate& t) { return t.child[0].boundary_distance_lb(y - t.offset); },
      },
      *node_);
}

// ---------------------------------------------------------------------------

Region make_ball(Dim d, std::span<const double> center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be > 0");
  return Region(d, Ball{to_vec(center, d), radius});
}

Region make_box(Dim d, std::span<const double> lo, std::span<const double> hi) {
  Box b{to_vec(lo, d), to_vec(hi, d)};
  for (int i = 0; i < d; ++i)
    if (!(b.lo[i] < b.hi[i])) throw std::invalid_argument("box needs lo < hi componentwise");
  return Region(d, b);
}

Region make_halfspace(Dim d, std::span<const double> normal, double offset) {
  Vec n = to_vec(normal, d);
  const double l = norm(n);
  if (!(l > 0.0)) throw std::invalid_argument("half-space normal must be nonzero");
  return Region(d, HalfSpace{(1.0 / l) * n, offset / l});
}

Region make_sector_angle(double theta0) {
  if (!(theta0 > 0.0 && theta0 <= kTwoPi)) throw std::invalid_argument("sector angle must lie in (0, 2pi]");
  Sector s;
  s.arcs.push_back({0.0, theta0});
  return Region(Dim(2), s);
}

Region make_sector(Dim d, Sector s) {
  if (d == 1) {
    if (s.signs.empty()) throw std::invalid_argument("d=1 sector needs signs");
    for (int v : s.signs)
      if (v != 1 && v != -1) throw std::invalid_argument("sector signs must be +1 or -1");
  } else if (d == 2) {
    if (s.arcs.empty()) throw std::invalid_argument("d=2 sector needs arcs");
    for (const Arc& a : s.arcs)
      if (!(a.length > 0.0)) throw std::invalid_argument("sector arc length must be > 0");
  } else {
    if (s.caps.empty()) throw std::invalid_argument("d=3 sector needs caps");
    for (Cap& c : s.caps) {
      const double l = norm(c.axis);
      if (!(l > 0.0)) throw std::invalid_argument("cap axis must be nonzero");
      c.axis = (1.0 / l) * c.axis;
      if (!(c.half_angle > 0.0 && c.half_angle <= kPi))
        throw std::invalid_argument("cap half_angle must lie in (0, pi]");
    }
  }
  return Region(d, std::move(s));
}

Region make_shells(Dim d, ShellPattern pattern, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("shell scale must be > 0");
  return Region(d, RadialShells{pattern, scale});
}

Region make_complement(Region r) {
  const Dim d(r.dim());
  // Up to a null set the complement of a half-space is the opposite one.
  if (const auto* h = std::get_if<HalfSpace>(&r.node())) return Region(d, HalfSpace{-1.0 * h->normal, -h->offset});
  return Region(d, Complement{{std::move(r)}});
}

Region make_union(std::vector<Region> rs) {
  if (rs.empty()) throw std::invalid_argument("union needs at least one child");
  const Dim d(rs.front().dim());
  return Region(d, Union{std::move(rs)});
}

Region make_intersection(std::vector<Region> rs) {
  if (rs.empty()) throw std::invalid_argument("intersection needs at least one child");
  const Dim d(rs.front().dim());
  return Region(d, Intersection{std::move(rs)});
}

Region make_translate(Region r, std::span<const double> offset) {
  const Dim d(r.dim());
  const Vec v = to_vec(offset, d);
  return Region(d, Translate{{std::move(r)}, v});
}

SphereConstant sphere_measure(Dim d) { return {d.value(), sphere_area(d)}; }

double unit_ball_volume(int d) { return sphere_area(d) / d; }

// ---------------------------------------------------------------------------

namespace {

std::optional<double> exact_volume(const Region& r) {
  const int d = r.dim();
  const RegionNode& n = r.node();
  if (const auto* b = std::get_if<Ball>(&n)) return unit_ball_volume(d) * std::pow(b->radius, d);
  if (const auto* b = std::get_if<Box>(&n)) {
    double v = 1.0;
    for (int i = 0; i < d; ++i) v *= b->hi[i] - b->lo[i];
    return v;
  }
  if (const auto* t = std::get_if<Translate>(&n)) return exact_volume(t->child[0]);
  if (const auto* in = std::get_if<Intersection>(&n); in && in->children.size() == 2) {
    const Ball* ball = nullptr;
    const HalfSpace* half = nullptr;
    for (const Region& c : in->children) {
      if (const auto* b = std::get_if<Ball>(&c.node())) ball = b;
      if (const auto* h = std::get_if<HalfSpace>(&c.node())) half = h;
    }
    if (ball && half && std::abs(dot(ball->center, half->normal) - half->offset) <= 1e-15 * ball->radius)
      return 0.5 * unit_ball_volume(d) * std::pow(ball->radius, d);
  }
  return std::nullopt;
}

struct LineIntegrator {
  const std::function<double(const Vec&)>& g;
  const Region& region;
  const RayBreakFn& extra;
  Vec lo, hi;
  int d;
  double rel_tol;
  // Typical |g|; sets absolute floors so cancellation noise near zeros of g
  // cannot fail the refinement.
  double scale;

  // Inner levels run tighter than outer ones so their rounding stays below
  // the outer refinement threshold.
  double level_tol(int axis) const { return std::max(rel_tol * std::pow(0.1, d - 1 - axis), 1e-14); }

  double abs_floor(int axis) const {
    double len = 1.0;
    for (int i = 0; i <= axis; ++i) len *= hi[i] - lo[i];
    return 1e-3 * rel_tol * scale * len;
  }

  // Integral over axis 0 at fixed transverse coordinates.
  double inner(const Vec& base) const {
    const Vec dir{1.0, 0.0, 0.0};
    Vec o = base;
    const double len = hi[0] - lo[0];
    // Start slightly outside the box so boundary breaks have r > 0.
    const double pad = 1e-3 * len + 1e-12;
    o[0] = lo[0] - pad;
    const double total = len + 2.0 * pad;
    std::vector<double> lbreaks;
    region.ray_breaks(o, dir, std::log(total), lbreaks);
    if (extra) extra(o, dir, std::log(total), lbreaks);
    std::vector<double> rs{0.0, total};
    for (double l : lbreaks) rs.push_back(std::exp(l));
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    double sum = 0.0;
    Integrate1dOptions opts;
    opts.rel_tol = level_tol(0);
    opts.abs_tol = abs_floor(0);
    opts.fail_rel_tol = 1e-4;
    for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
      const double a = rs[i], b = rs[i + 1];
      if (!(b - a > 1e-14 * total)) continue;
      Vec mid = o;
      mid[0] += 0.5 * (a + b);
      if (!region.contains(mid)) continue;
      auto f = [&](double r) {
        Vec y = o;
        y[0] += r;
        return g(y);
      };
      sum += integrate_1d(f, a, b, opts).value;
    }
    return sum;
  }

  double level(int axis, Vec base) const {
    if (axis == 0) return inner(base);
    Integrate1dOptions opts;
    opts.rel_tol = level_tol(axis);
    opts.abs_tol = abs_floor(axis);
    opts.fail_rel_tol = 1e-4;
    opts.max_intervals = 4000;
    auto f = [&](double t) {
      Vec b = base;
      b[axis] = t;
      return level(axis - 1, b);
    };
    return integrate_1d(f, lo[axis], hi[axis], opts).value;
  }
};

}  // namespace

EstimateWithError integrate_over_region(const std::function<double(const Vec&)>& g, const Region& r,
                                        const RayBreakFn& extra_breaks, double rel_tol) {
  const auto bb = r.bounding_box();
  if (!bb) throw std::invalid_argument("integration region must be bounded");
  const int d = r.dim();
  for (int i = 0; i < d; ++i)
    if (!(bb->second[i] > bb->first[i])) return EstimateWithError::exact(0.0);
  double scale = 0.0;
  constexpr int kProbe = 7;
  const int probes = d == 1 ? kProbe : d == 2 ? kProbe * kProbe : kProbe * kProbe * kProbe;
  for (int k = 0; k < probes; ++k) {
    Vec x{0.0, 0.0, 0.0};
    int idx = k;
    for (int i = 0; i < d; ++i) {
      x[i] = bb->first[i] + (bb->second[i] - bb->first[i]) * ((idx % kProbe) + 0.5) / kProbe;
      idx /= kProbe;
    }
    if (r.contains(x)) scale = std::max(scale, std::abs(g(x)));
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1e-300;
  LineIntegrator li{g, r, extra_breaks, bb->first, bb->second, d, rel_tol, scale};
  Vec base{0.0, 0.0, 0.0};
  const double v = li.level(d - 1, base);
  // Nested adaptive rule: report the requested tolerance as the bound.
  return EstimateWithError::analytic(v, std::max(rel_tol * std::abs(v), 1e-14));
}

EstimateWithError volume(const Region& r) {
  if (r.far_kind() != FarKind::bounded || !r.bounding_box())
    throw std::invalid_argument("volume of an unbounded region needs a bounding clip");
  if (auto v = exact_volume(r)) return EstimateWithError::exact(*v);
  return integrate_over_region([](const Vec&) { return 1.0; }, r);
}

EstimateWithError volume(const Region& r, const Region& clip) {
  if (clip.far_kind() != FarKind::bounded) throw std::invalid_argument("volume clip must be bounded");
  return volume(make_intersection({r, clip}));
}

EstimateWithError volume_mc(const Region& r, const QuadratureSpec& spec) {
  const auto bb = r.bounding_box();
  if (!bb) throw std::invalid_argument("volume of an unbounded region needs a bounding clip");
  const Dim d(r.dim());
  UniformBoxPairSampler sampler(bb->first, bb->second, d);
  // Pair sampler density is 1/V^2; weight by 1/V to integrate over x only.
  double vol = 1.0;
  for (int i = 0; i < d; ++i) vol *= bb->second[i] - bb->first[i];
  return mc_double_integral(
      [&](const Vec& x, const Vec&) { return r.contains(x) ? 1.0 / vol : 0.0; }, sampler, spec);
}

double distance_to_boundary(const Region& r, std::span<const double> x) {
  const Vec y = to_vec(x, r.dim());
  if (!r.contains(y)) throw std::invalid_argument("distance_to_boundary: point not in region");
  return r.boundary_distance_lb(y);
}

}  // namespace fracms
