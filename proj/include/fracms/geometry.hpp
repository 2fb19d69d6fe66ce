#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "fracms/quad.hpp"
#include "fracms/vec.hpp"

namespace fracms {

/// Beyond ln|y| = kLnFar points are no longer formed explicitly; membership and
/// field values are taken from their far-field (direction, ln r) form.
inline constexpr double kLnFar = 600.0;
inline constexpr int kMaxRegionDepth = 8;

class Region;

struct Ball {
  Vec center{};
  double radius = 1.0;
};

struct Box {
  Vec lo{}, hi{};
};

/// { y : y . normal >= offset }, normal of unit length.
struct HalfSpace {
  Vec normal{};
  double offset = 0.0;
};

/// Counter-clockwise arc of directions [start, start + length] in d = 2.
struct Arc {
  double start = 0.0;
  double length = 0.0;
};

/// Directions within half_angle of axis in d = 3.
struct Cap {
  Vec axis{};
  double half_angle = 0.0;
};

/// Cone with apex at the origin. Exactly one of the lists is used, by dimension:
/// signs (+1/-1) in d = 1, arcs in d = 2, caps in d = 3.
struct Sector {
  std::vector<int> signs;
  std::vector<Arc> arcs;
  std::vector<Cap> caps;
};

enum class ShellPattern {
  /// ln|y| in [scale 4^k, 2 scale 4^k), k >= 0
  log_dyadic,
  /// |y| in [scale 4^k, 2 scale 4^k), k >= 0
  dyadic,
};

struct RadialShells {
  ShellPattern pattern = ShellPattern::log_dyadic;
  double scale = 1.0;
};

struct Complement {
  std::vector<Region> child;  // exactly one
};
struct Union {
  std::vector<Region> children;
};
struct Intersection {
  std::vector<Region> children;
};
/// child shifted by offset: contains(y) = child.contains(y - offset).
struct Translate {
  std::vector<Region> child;  // exactly one
  Vec offset{};
};

using RegionNode =
    std::variant<Ball, Box, HalfSpace, Sector, RadialShells, Complement, Union, Intersection, Translate>;

/// How membership behaves as |y| -> infinity.
enum class FarKind {
  bounded,  // empty outside a ball
  angular,  // depends on direction only
  unknown,  // depends on |y| forever (radial shells)
};

/// Immutable CSG region in R^d, cheap to copy.
class Region {
 public:
  Region(Dim d, RegionNode node);

  int dim() const { return d_; }
  const RegionNode& node() const { return *node_; }
  int depth() const { return depth_; }

  bool contains(const Vec& y) const;
  bool contains(std::span<const double> y) const;
  /// Membership of e^{ln_r} dir for ln_r >= kLnFar.
  bool contains_far(const Vec& dir, double ln_r) const;
  /// Membership of o + e^{ln_r} dir, switching to the far form when needed.
  bool contains_at(const Vec& o, const Vec& dir, double ln_r) const;

  /// Appends ln r for every r > 0 with ln r < ln_cap at which membership of
  /// o + r dir may change. Extra entries are harmless.
  void ray_breaks(const Vec& o, const Vec& dir, double ln_cap, std::vector<double>& out) const;
  /// Directions (d = 2 angles) where the far-field membership may jump.
  void angular_breaks(std::vector<double>& out) const;

  FarKind far_kind() const;
  std::optional<double> bounding_radius() const;
  std::optional<std::pair<Vec, Vec>> bounding_box() const;
  /// Lower bound on the distance from y to the boundary (y in or out).
  double boundary_distance_lb(const Vec& y) const;

 private:
  int d_;
  int depth_;
  std::shared_ptr<const RegionNode> node_;
};

// Constructors with validation.
Region make_ball(Dim d, std::span<const double> center, double radius);
Region make_box(Dim d, std::span<const double> lo, std::span<const double> hi);
Region make_halfspace(Dim d, std::span<const double> normal, double offset);
Region make_sector_angle(double theta0);  // d = 2, arc [0, theta0]
Region make_sector(Dim d, Sector s);
Region make_shells(Dim d, ShellPattern pattern, double scale);
Region make_complement(Region r);
Region make_union(std::vector<Region> rs);
Region make_intersection(std::vector<Region> rs);
Region make_translate(Region r, std::span<const double> offset);

struct SphereConstant {
  int d;
  double value;
};

/// H^{d-1}(S^{d-1}).
SphereConstant sphere_measure(Dim d);
/// Lebesgue measure of the unit ball.
double unit_ball_volume(int d);

/// Exact for balls, boxes and half-balls cut through the center; adaptive
/// quadrature along ray breakpoints otherwise. Throws for unbounded regions.
EstimateWithError volume(const Region& r);
EstimateWithError volume(const Region& r, const Region& clip);
/// Plain Monte-Carlo volume over the bounding box.
EstimateWithError volume_mc(const Region& r, const QuadratureSpec& spec);

/// Lower bound on dist(x, boundary of r); x must lie in r.
double distance_to_boundary(const Region& r, std::span<const double> x);

using RayBreakFn = std::function<void(const Vec& o, const Vec& dir, double ln_cap, std::vector<double>& out)>;

/// Integral of g over a bounded region by nested adaptive quadrature on lines;
/// extra_breaks adds discontinuities of g along axis-parallel lines.
EstimateWithError integrate_over_region(const std::function<double(const Vec&)>& g, const Region& r,
                                        const RayBreakFn& extra_breaks = {}, double rel_tol = 1e-10);

}  // namespace fracms
