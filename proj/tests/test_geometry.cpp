#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fracms/geometry.hpp"

using namespace fracms;

namespace {

constexpr double kPi = std::numbers::pi;

Region ball(std::vector<double> c, double r) { return make_ball(Dim(static_cast<int>(c.size())), c, r); }

Region box(std::vector<double> lo, std::vector<double> hi) {
  return make_box(Dim(static_cast<int>(lo.size())), lo, hi);
}

Region halfspace(std::vector<double> n, double offset) {
  return make_halfspace(Dim(static_cast<int>(n.size())), n, offset);
}

}  // namespace

TEST_CASE("membership of primitives") {
  const Region b = ball({1, 0}, 0.5);
  CHECK(b.contains(Vec{1.2, 0.1, 0}));
  CHECK_FALSE(b.contains(Vec{0.4, 0, 0}));

  const Region bx = box({0, 0, 0}, {1, 2, 3});
  CHECK(bx.contains(Vec{0.5, 1.5, 2.5}));
  CHECK_FALSE(bx.contains(Vec{0.5, 2.5, 2.5}));

  const Region h = halfspace({0, 2}, 0.5);  // the set {2y >= 0.5}
  CHECK(h.contains(Vec{-3, 0.3, 0}));
  CHECK_FALSE(h.contains(Vec{-3, 0.2, 0}));

  const Region q = make_sector_angle(kPi / 2);
  CHECK(q.contains(Vec{1, 1, 0}));
  CHECK_FALSE(q.contains(Vec{-1, 1, 0}));
  CHECK_FALSE(q.contains(Vec{1, -1, 0}));

  Sector s1;
  s1.signs = {-1};
  const Region neg = make_sector(Dim(1), s1);
  CHECK(neg.contains(Vec{-2, 0, 0}));
  CHECK_FALSE(neg.contains(Vec{2, 0, 0}));

  Sector cap;
  cap.caps = {Cap{{0, 0, 1}, kPi / 4}};
  const Region cone = make_sector(Dim(3), cap);
  CHECK(cone.contains(Vec{0.1, 0.1, 1}));
  CHECK_FALSE(cone.contains(Vec{1, 0, 0.5}));
}

TEST_CASE("membership of combinators") {
  const Region a = ball({0, 0}, 1), b = ball({1, 0}, 1);
  const Region u = make_union({a, b}), i = make_intersection({a, b}), c = make_complement(a);
  const Vec p{1.8, 0, 0}, q{0.5, 0, 0}, r{-3, 0, 0};
  CHECK(u.contains(p));
  CHECK_FALSE(i.contains(p));
  CHECK(i.contains(q));
  CHECK(c.contains(r));
  CHECK_FALSE(c.contains(q));
  const std::vector<double> off{5, 5};
  const Region t = make_translate(a, off);
  CHECK(t.contains(Vec{5.5, 5, 0}));
  CHECK_FALSE(t.contains(Vec{0, 0, 0}));
}

TEST_CASE("constructor validation") {
  std::vector<double> c2{0, 0};
  CHECK_THROWS_AS(make_ball(Dim(2), c2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_box(Dim(2), std::vector<double>{0, 0}, std::vector<double>{1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(make_halfspace(Dim(2), std::vector<double>{0, 0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_sector_angle(7.0), std::invalid_argument);
  CHECK_THROWS_AS(make_union({ball({0, 0}, 1), ball({0, 0, 0}, 1)}), std::invalid_argument);
  CHECK_THROWS_AS(Dim(4), std::invalid_argument);
  Region deep = ball({0, 0}, 1);
  CHECK_THROWS_AS(
      [&] {
        for (int k = 0; k < kMaxRegionDepth + 2; ++k) deep = make_complement(deep);
      }(),
      std::invalid_argument);
}

TEST_CASE("sphere measure and unit ball volume against Gamma-function formulas") {
  for (int d = 1; d <= 3; ++d) {
    const double area = 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
    CHECK(sphere_measure(Dim(d)).value == doctest::Approx(area).epsilon(1e-15));
    CHECK(unit_ball_volume(d) == doctest::Approx(area / d).epsilon(1e-15));
  }
}

TEST_CASE("volume: exact cases and quadrature cases") {
  CHECK(volume(ball({0, 0, 0}, 2)).value == doctest::Approx(4.0 / 3.0 * kPi * 8.0).epsilon(1e-14));
  CHECK(volume(box({0, 0}, {2, 3})).value == doctest::Approx(6.0));

  const Region unit = ball({0, 0}, 1);
  const auto half = volume(make_intersection({halfspace({0, 1}, 0), unit}));
  CHECK(half.value == doctest::Approx(kPi / 2).epsilon(1e-9));

  const auto quarter = volume(make_intersection({make_sector_angle(kPi / 2), unit}));
  CHECK(quarter.value == doctest::Approx(kPi / 4).epsilon(1e-9));

  // Lens of two unit disks at distance 1: 2 acos(1/2) - (1/2) sqrt(3).
  const auto lens = volume(make_intersection({unit, ball({1, 0}, 1)}));
  CHECK(lens.value == doctest::Approx(2.0 * std::acos(0.5) - 0.5 * std::sqrt(3.0)).epsilon(1e-8));

  // Circular segment above y = 1/2: acos(h) - h sqrt(1 - h^2).
  const auto seg = volume(make_intersection({halfspace({0, 1}, 0.5), unit}));
  CHECK(seg.value == doctest::Approx(std::acos(0.5) - 0.5 * std::sqrt(0.75)).epsilon(1e-8));

  CHECK_THROWS(volume(halfspace({0, 1}, 0)));
}

TEST_CASE("volume_mc agrees with the lens formula within statistical error") {
  const Region lens = make_intersection({ball({0, 0}, 1), ball({1, 0}, 1)});
  QuadratureSpec q;
  q.sample_budget = 100000;
  const auto e = volume_mc(lens, q);
  const double exact = 2.0 * std::acos(0.5) - 0.5 * std::sqrt(3.0);
  CHECK(e.kind == ErrorKind::statistical);
  CHECK(std::abs(e.value - exact) < 5.0 * e.error);
}

TEST_CASE("bounding radius and box") {
  CHECK(*ball({3, 4}, 1).bounding_radius() == doctest::Approx(6.0));
  const auto bb = box({-1, -2}, {1, 3}).bounding_box();
  REQUIRE(bb);
  CHECK(bb->first[1] == -2.0);
  CHECK(bb->second[1] == 3.0);
  CHECK_FALSE(halfspace({1, 0}, 0).bounding_radius());
  const Region cut = make_intersection({halfspace({1, 0}, 0), ball({0, 0}, 2)});
  REQUIRE(cut.bounding_radius());
  CHECK(*cut.bounding_radius() <= 2.0 + 1e-12);
}

TEST_CASE("far-field classification") {
  CHECK(ball({0, 0}, 1).far_kind() == FarKind::bounded);
  CHECK(make_sector_angle(1.0).far_kind() == FarKind::angular);
  CHECK(halfspace({0, 1}, 3).far_kind() == FarKind::angular);
  CHECK(make_shells(Dim(2), ShellPattern::log_dyadic, 1.0).far_kind() == FarKind::unknown);
  // Far membership of a shifted half-plane is that of the half-plane through 0.
  const Region h = halfspace({0, 1}, 3);
  CHECK(h.contains_far({0.6, 0.8, 0}, 700.0));
  CHECK_FALSE(h.contains_far({0.6, -0.8, 0}, 700.0));
}

TEST_CASE("property: membership is constant between consecutive ray breaks") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const Region regions[] = {
      make_union({ball({0.3, 0}, 0.7), make_intersection({halfspace({1, 1}, 0.2), box({-2, -2}, {2, 0.5})})}),
      make_complement(make_intersection({make_sector_angle(2.0), ball({0, 0}, 1.5)})),
      make_shells(Dim(2), ShellPattern::dyadic, 0.5),
      make_translate(box({0, 0}, {1, 1}), std::vector<double>{-0.5, 0.25}),
  };
  for (const Region& r : regions) {
    for (int trial = 0; trial < 40; ++trial) {
      const Vec o{U(rng), U(rng), 0};
      const double ang = kPi * U(rng);
      const Vec dir{std::cos(ang), std::sin(ang), 0};
      std::vector<double> br;
      r.ray_breaks(o, dir, std::log(50.0), br);
      br.push_back(std::log(1e-3));
      br.push_back(std::log(50.0));
      std::sort(br.begin(), br.end());
      for (std::size_t k = 0; k + 1 < br.size(); ++k) {
        if (br[k + 1] - br[k] < 1e-9 || br[k] < std::log(1e-3) || br[k + 1] > std::log(50.0)) continue;
        const bool first = r.contains_at(o, dir, br[k] + 0.05 * (br[k + 1] - br[k]));
        for (double t : {0.3, 0.5, 0.7, 0.95})
          CHECK(r.contains_at(o, dir, br[k] + t * (br[k + 1] - br[k])) == first);
      }
    }
  }
}

TEST_CASE("distance_to_boundary is a lower bound") {
  const Region r = make_intersection({ball({0, 0}, 1), halfspace({0, 1}, 0)});
  const std::vector<double> x{0.1, 0.2};
  const double dist = distance_to_boundary(r, x);
  CHECK(dist > 0.0);
  CHECK(dist <= 0.2 + 1e-12);
}

TEST_CASE("integrate_over_region: radial moment of the unit ball") {
  // int_{B_1} |x|^2 = d omega_d / (d + 2)
  for (int d = 1; d <= 3; ++d) {
    std::vector<double> c(d, 0.0);
    const Region b = make_ball(Dim(d), c, 1.0);
    const auto e = integrate_over_region([](const Vec& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }, b);
    CHECK(e.value == doctest::Approx(sphere_measure(Dim(d)).value / (d + 2)).epsilon(1e-8));
  }
}
