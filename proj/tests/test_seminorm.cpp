#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracms/seminorm.hpp"

using namespace fracms;

namespace {

Region interval(double a, double b) { return make_box(Dim(1), std::vector<double>{a}, std::vector<double>{b}); }

Field bump2d() {
  const Region disk = make_ball(Dim(2), std::vector<double>{0, 0}, 1.0);
  const Field p = make_polynomial(Dim(2), {{{0, 0, 0}, 1}, {{2, 0, 0}, -1}, {{0, 2, 0}, -1}});
  return make_product({power(p, 2), make_indicator(disk)});
}

QuadratureSpec budget(std::uint64_t n) {
  QuadratureSpec q;
  q.sample_budget = n;
  return q;
}

bool within(const EstimateWithError& e, double exact, double sigmas) {
  return std::abs(e.value - exact) <= sigmas * e.error + 1e-12 * std::abs(exact);
}

}  // namespace

TEST_CASE("fractional perimeter of a half-line against its closed form") {
  // E = (0, inf), Omega = (-1, 1): Per_s = int over (0,inf)^2 minus [1,inf)^2
  // of (x + y)^{-1-s} = 2^{1-s} / (s (1 - s)).
  const Region E = make_halfspace(Dim(1), std::vector<double>{1}, 0.0);
  const Region omega = interval(-1, 1);
  for (double s : {0.3, 0.05}) {
    const auto per = fractional_perimeter(E, omega, s, default_radius(omega), budget(40000));
    const double exact = std::pow(2.0, 1.0 - s) / (s * (1.0 - s));
    CHECK(within(per, exact, 5.0));
  }
}

TEST_CASE("seminorm of an interval indicator against its closed form") {
  // u = chi_(-1,1) on Omega = (-1,1), p = 2: 2 int_{-1}^{1} ((1-x)^{-2s} + (1+x)^{-2s}) / (2s) dx.
  const Region omega = interval(-1, 1);
  const Field u = make_indicator(omega);
  const double s = 0.2;
  const auto b = gagliardo_qomega(u, omega, s, 2, default_radius(omega), budget(40000));
  const double exact = 4.0 * std::pow(2.0, 1.0 - 2.0 * s) / (2.0 * s * (1.0 - 2.0 * s));
  CHECK(within(b.total, exact, 5.0));
  CHECK(b.interior_interior.value == doctest::Approx(0.0));
}

TEST_CASE("breakdown components add up") {
  const Region disk = make_ball(Dim(2), std::vector<double>{0, 0}, 1.0);
  const auto b = gagliardo_qomega(bump2d(), disk, 0.1, 2, 2.0, budget(20000));
  CHECK(b.total.value ==
        doctest::Approx(b.interior_interior.value + 2.0 * (b.interior_exterior_near.value + b.interior_exterior_tail.value)));
  CHECK(b.s == 0.1);
  CHECK(b.p == 2);
  CHECK(b.R == 2.0);
  CHECK(b.total.kind == ErrorKind::statistical);
}

TEST_CASE("seminorm vanishes on constants and is p-homogeneous") {
  const Region disk = make_ball(Dim(2), std::vector<double>{0, 0}, 1.0);
  const auto zero = gagliardo_qomega(make_constant(Dim(2), 4.0), disk, 0.2, 2, 2.0, budget(4000));
  CHECK(zero.total.value == 0.0);

  const Field u = make_indicator(make_sector_angle(1.0));
  for (int p : {1, 2, 3}) {
    const double s = 0.1;
    const auto a = gagliardo_qomega(u, disk, s, p, 2.0, budget(4000));
    const auto b = gagliardo_qomega(make_scale(u, -3.0), disk, s, p, 2.0, budget(4000));
    CHECK(b.total.value == doctest::Approx(std::pow(3.0, p) * a.total.value).epsilon(1e-12));
  }
}

TEST_CASE("property: shifting the field shifts nothing but the constant") {
  const Region disk = make_ball(Dim(2), std::vector<double>{0, 0}, 1.0);
  const Field u = bump2d();
  const auto a = gagliardo_qomega(u, disk, 0.05, 2, 2.0, budget(4000));
  const auto b = gagliardo_qomega(make_sum({u, make_constant(Dim(2), 7.0)}), disk, 0.05, 2, 2.0, budget(4000));
  CHECK(b.total.value == doctest::Approx(a.total.value).epsilon(1e-12));
}

TEST_CASE("interior-interior term agrees with independent pair sampling") {
  const Region disk = make_ball(Dim(2), std::vector<double>{0, 0}, 1.0);
  const Field u = bump2d();
  const double s = 0.3;
  const auto ray = gagliardo_qomega(u, disk, s, 2, 2.0, budget(40000)).interior_interior;
  const auto pair = interior_interior_pair_mc(u, disk, s, 2, 2.0, 1e-4, 2.0, budget(400000));
  // Pairs closer than 1e-4 are dropped; their share is O(1e-4^{2-2s}).
  CHECK(std::abs(ray.value - pair.value) <= 5.0 * std::hypot(ray.error, pair.error) + 1e-4 * ray.value);
}

TEST_CASE("Hardy inequality holds with margin and checks its range") {
  const Region disk = make_ball(Dim(2), std::vector<double>{0, 0}, 1.0);
  const auto h = hardy_pair(bump2d(), disk, 0.01, 0.5, Dim(2), budget(20000));
  CHECK(h.lhs.value > 0.0);
  CHECK(h.rhs.value - h.lhs.value > h.rhs.error + h.lhs.error);
  CHECK_THROWS_AS(hardy_pair(bump2d(), disk, 0.04, 0.5, Dim(2), budget(20000)), std::invalid_argument);
}

TEST_CASE("seminorm input validation") {
  const Region disk = make_ball(Dim(2), std::vector<double>{0, 0}, 1.0);
  const Field chi = make_indicator(make_sector_angle(1.0));
  CHECK_THROWS_AS(gagliardo_qomega(chi, disk, 0.6, 2, 2.0, budget(4000)), std::invalid_argument);
  CHECK_THROWS_AS(gagliardo_qomega(chi, disk, 0.2, 2, 1.0, budget(4000)), std::invalid_argument);
  CHECK_THROWS_AS(gagliardo_qomega(make_polynomial(Dim(2), {{{2, 0, 0}, 1}}), disk, 0.1, 2, 2.0, budget(4000)),
                  std::invalid_argument);
  CHECK_THROWS_AS(gagliardo_qomega(chi, make_sector_angle(1.0), 0.1, 2, 2.0, budget(4000)), std::invalid_argument);
  CHECK(default_radius(disk) == doctest::Approx(2.0));
}
