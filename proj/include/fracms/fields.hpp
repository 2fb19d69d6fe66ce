#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "fracms/geometry.hpp"
#include "fracms/sphere.hpp"

namespace fracms {

class Field;

inline constexpr int kMaxPolynomialDegree = 4;

struct Monomial {
  std::array<int, 3> exps{0, 0, 0};
  double coef = 0.0;
};

struct ConstantF {
  double c = 0.0;
};
struct IndicatorF {
  Region region;
};
struct PolynomialF {
  std::vector<Monomial> terms;
};

enum class RadialProfile {
  exp,       // phi(r) = exp(-rate r)
  rational,  // phi(r) = (1 + r)^{-rate}
};

/// u(y) = A(y/|y|) + B(y/|y|) phi(|y|); A and B are polynomials in the
/// direction components, and u tends to A along every ray.
struct RadialAngularF {
  PolynomialF a;
  PolynomialF b;
  RadialProfile profile = RadialProfile::exp;
  double rate = 1.0;
};

/// d = 1 piecewise-constant profile: value values[i] on [breaks[i], breaks[i+1])
/// with breaks[0] = 0 and breaks.back() = period, repeated with that period.
struct Periodic1DF {
  double period = 1.0;
  std::vector<double> breaks;
  std::vector<double> values;
};

struct ShiftF {
  std::vector<Field> child;  // exactly one; u(y) = child(y - offset)
  Vec offset{};
};
struct SumF {
  std::vector<Field> children;
};
struct ProductF {
  std::vector<Field> children;
};
struct ScaleF {
  std::vector<Field> child;
  double c = 1.0;
};
struct PosPartF {
  std::vector<Field> child;
};
struct NegPartF {
  std::vector<Field> child;
};
struct PowerF {
  std::vector<Field> child;
  int k = 1;
};

using FieldNode = std::variant<ConstantF, IndicatorF, PolynomialF, RadialAngularF, Periodic1DF, ShiftF, SumF,
                               ProductF, ScaleF, PosPartF, NegPartF, PowerF>;

struct CompactSupport {
  double radius = 0.0;
};
struct AngularLimit {
  AngularFunction u_inf;
  /// Radius beyond which the field is within tolerance of u_inf (advisory).
  double radius_estimate = 0.0;
};
struct PeriodicMean {
  double mean = 0.0;
};
struct UnknownTail {};

using TailModel = std::variant<CompactSupport, AngularLimit, PeriodicMean, UnknownTail>;

std::string tail_kind_name(const TailModel& t);

/// Immutable scalar field on R^d, built as a constructor tree.
class Field {
 public:
  Field(Dim d, FieldNode node);

  int dim() const { return d_; }
  const FieldNode& node() const { return *node_; }

  double eval(const Vec& y) const;
  double eval(std::span<const double> y) const;
  /// Value at e^{ln_r} dir for ln_r >= kLnFar; NaN when the field grows.
  double eval_far(const Vec& dir, double ln_r) const;
  /// Value at o + e^{ln_r} dir.
  double eval_at(const Vec& o, const Vec& dir, double ln_r) const;

  /// ln r of discontinuities of the field along o + r dir, r < e^{ln_cap}.
  void ray_breaks(const Vec& o, const Vec& dir, double ln_cap, std::vector<double>& out) const;
  /// Angles (d = 2) where the far-field value may jump.
  void angular_breaks(std::vector<double>& out) const;
  /// The value if the field is constant on the ray segment (la, lb) between
  /// consecutive breaks, otherwise nullopt.
  std::optional<double> constant_on(const Vec& o, const Vec& dir, double la, double lb) const;

  TailModel tail_model() const;
  /// True when the field may jump (indicators, periodic profiles).
  bool has_jumps() const;
  /// True when some region inside has infinitely many ray breaks.
  bool has_unbounded_breaks() const;
  bool has_periodic() const;

 private:
  int d_;
  std::shared_ptr<const FieldNode> node_;
};

Field make_constant(Dim d, double c);
Field make_indicator(Region r);
Field make_polynomial(Dim d, std::vector<Monomial> terms);
Field make_radial_angular(Dim d, std::vector<Monomial> a, std::vector<Monomial> b, RadialProfile profile,
                          double rate);
Field make_periodic(double period, std::vector<double> breaks, std::vector<double> values);
Field make_shift(Field f, std::span<const double> offset);
Field make_sum(std::vector<Field> fs);
Field make_product(std::vector<Field> fs);
Field make_scale(Field f, double c);

/// u^k with structural simplification for constants, indicators and periodic profiles.
Field power(const Field& f, int k);
Field pos_part(const Field& f);
Field neg_part(const Field& f);

inline TailModel tail_model(const Field& f) { return f.tail_model(); }

double eval_polynomial(const PolynomialF& p, const Vec& y);

}  // namespace fracms
