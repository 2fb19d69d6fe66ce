#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fracms/fields.hpp"
#include "fracms/sphere.hpp"

using namespace fracms;

namespace {

constexpr double kPi = std::numbers::pi;

Region unit_disk() { return make_ball(Dim(2), std::vector<double>{0, 0}, 1.0); }

Field bump() {
  // (1 - x^2 - y^2)^2 on the unit disk
  Field p = make_polynomial(Dim(2), {{{0, 0, 0}, 1}, {{2, 0, 0}, -1}, {{0, 2, 0}, -1}});
  return make_product({power(p, 2), make_indicator(unit_disk())});
}

}  // namespace

TEST_CASE("evaluation of elementary fields") {
  const Field c = make_constant(Dim(2), 2.5);
  CHECK(c.eval(Vec{7, -3, 0}) == 2.5);

  const Field p = make_polynomial(Dim(3), {{{1, 2, 0}, 3.0}, {{0, 0, 1}, -1.0}});
  CHECK(p.eval(Vec{2, 3, 5}) == doctest::Approx(3.0 * 2 * 9 - 5));

  const Field b = bump();
  CHECK(b.eval(Vec{0.5, 0, 0}) == doctest::Approx(0.5625));
  CHECK(b.eval(Vec{1.5, 0, 0}) == 0.0);

  const Field per = make_periodic(2.0, {0.0, 0.5, 2.0}, {1.0, -1.0});
  CHECK(per.eval(Vec{0.25, 0, 0}) == 1.0);
  CHECK(per.eval(Vec{1.0, 0, 0}) == -1.0);
  CHECK(per.eval(Vec{4.25, 0, 0}) == 1.0);
  CHECK(per.eval(Vec{-1.75, 0, 0}) == 1.0);  // -1.75 = 0.25 - 2

  const Field ra = make_radial_angular(Dim(2), {{{1, 0, 0}, 1.0}}, {{{0, 0, 0}, 2.0}}, RadialProfile::exp, 1.0);
  const Vec y{3, 4, 0};
  CHECK(ra.eval(y) == doctest::Approx(0.6 + 2.0 * std::exp(-5.0)));
  const Field rr = make_radial_angular(Dim(2), {{{0, 1, 0}, 1.0}}, {{{0, 0, 0}, 1.0}}, RadialProfile::rational, 2.0);
  CHECK(rr.eval(y) == doctest::Approx(0.8 + 1.0 / 36.0));
}

TEST_CASE("combinators") {
  const Field x = make_polynomial(Dim(1), {{{1, 0, 0}, 1.0}});
  const Field one = make_constant(Dim(1), 1.0);
  const Vec at{-0.75, 0, 0};
  CHECK(make_sum({x, one}).eval(at) == doctest::Approx(0.25));
  CHECK(make_product({x, x}).eval(at) == doctest::Approx(0.5625));
  CHECK(make_scale(x, -4).eval(at) == doctest::Approx(3.0));
  CHECK(power(x, 3).eval(at) == doctest::Approx(-0.421875));
  CHECK(pos_part(x).eval(at) == 0.0);
  CHECK(neg_part(x).eval(at) == doctest::Approx(0.75));
  const std::vector<double> off{2.0};
  CHECK(make_shift(x, off).eval(Vec{1.25, 0, 0}) == doctest::Approx(-0.75));
  CHECK_THROWS_AS(make_sum({x, make_constant(Dim(2), 1)}), std::invalid_argument);
  CHECK(power(x, 0).eval(at) == 1.0);
  CHECK_THROWS_AS(power(x, -1), std::invalid_argument);
}

TEST_CASE("periodic profile validation") {
  CHECK_THROWS_AS(make_periodic(1.0, {0.0, 0.5}, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_periodic(1.0, {0.1, 1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_periodic(1.0, {0.0, 0.7, 0.5, 1.0}, {1.0, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_periodic(-1.0, {0.0, -1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("property: positive and negative parts recombine") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  const Field f = make_sum({make_polynomial(Dim(2), {{{1, 1, 0}, 1.0}, {{0, 0, 0}, -0.5}}),
                            make_indicator(make_sector_angle(kPi / 3))});
  const Field abs_f = make_sum({pos_part(f), neg_part(f)});
  const Field diff = make_sum({pos_part(f), make_scale(neg_part(f), -1.0)});
  for (int i = 0; i < 200; ++i) {
    const Vec y{U(rng), U(rng), 0};
    CHECK(abs_f.eval(y) == doctest::Approx(std::abs(f.eval(y))));
    CHECK(diff.eval(y) == doctest::Approx(f.eval(y)));
  }
}

TEST_CASE("property: eval_at agrees with eval along rays") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const Field f = make_sum({bump(), make_indicator(make_halfspace(Dim(2), std::vector<double>{1, 1}, 0.3)),
                            make_radial_angular(Dim(2), {{{1, 0, 0}, 1.0}}, {{{0, 0, 0}, 1.0}}, RadialProfile::exp, 1.0)});
  for (int i = 0; i < 100; ++i) {
    const Vec o{U(rng), U(rng), 0};
    const double a = kPi * U(rng);
    const Vec dir{std::cos(a), std::sin(a), 0};
    const double ln_r = 3.0 * U(rng);
    const double r = std::exp(ln_r);
    const Vec y{o[0] + r * dir[0], o[1] + r * dir[1], 0};
    CHECK(f.eval_at(o, dir, ln_r) == doctest::Approx(f.eval(y)).epsilon(1e-12));
  }
}

TEST_CASE("constant_on detects piecewise-constant segments") {
  const Field chi = make_indicator(unit_disk());
  const Vec o{0, 0, 0}, dir{1, 0, 0};
  std::vector<double> br;
  chi.ray_breaks(o, dir, 10.0, br);
  REQUIRE(br.size() >= 1);
  const auto in = chi.constant_on(o, dir, -3.0, -0.5);
  const auto out = chi.constant_on(o, dir, 0.5, 3.0);
  REQUIRE(in);
  REQUIRE(out);
  CHECK(*in == 1.0);
  CHECK(*out == 0.0);
  CHECK_FALSE(bump().constant_on(o, dir, -3.0, -0.5));
}

TEST_CASE("tail models") {
  CHECK(std::holds_alternative<AngularLimit>(make_constant(Dim(2), 1).tail_model()));
  CHECK(std::holds_alternative<CompactSupport>(bump().tail_model()));
  CHECK(std::holds_alternative<AngularLimit>(make_indicator(make_sector_angle(1.0)).tail_model()));
  CHECK(std::holds_alternative<UnknownTail>(
      make_indicator(make_shells(Dim(2), ShellPattern::log_dyadic, 1.0)).tail_model()));
  CHECK(std::holds_alternative<UnknownTail>(make_polynomial(Dim(2), {{{1, 0, 0}, 1.0}}).tail_model()));

  const auto per = make_periodic(1.0, {0.0, 0.25, 1.0}, {4.0, 0.0}).tail_model();
  REQUIRE(std::holds_alternative<PeriodicMean>(per));
  CHECK(std::get<PeriodicMean>(per).mean == doctest::Approx(1.0));

  // u_inf of the radial-angular field is its angular part A.
  const Field ra = make_radial_angular(Dim(2), {{{1, 0, 0}, 2.0}}, {{{0, 0, 0}, 1.0}}, RadialProfile::exp, 1.0);
  const auto t = ra.tail_model();
  REQUIRE(std::holds_alternative<AngularLimit>(t));
  const auto& lim = std::get<AngularLimit>(t);
  CHECK(lim.u_inf(direction_2d(kPi / 3)) == doctest::Approx(1.0));

  // A sum whose pieces are compact plus angular is angular.
  const auto mixed = make_sum({bump(), make_indicator(make_sector_angle(kPi))}).tail_model();
  REQUIRE(std::holds_alternative<AngularLimit>(mixed));
  CHECK(std::get<AngularLimit>(mixed).u_inf(direction_2d(kPi / 2)) == 1.0);
  CHECK(std::get<AngularLimit>(mixed).u_inf(direction_2d(-kPi / 2)) == 0.0);
}

TEST_CASE("far evaluation") {
  const Field ra = make_radial_angular(Dim(2), {{{0, 1, 0}, 1.0}}, {{{0, 0, 0}, 1.0}}, RadialProfile::rational, 1.0);
  CHECK(ra.eval_far({0, 1, 0}, 700.0) == doctest::Approx(1.0));
  CHECK(std::isnan(make_polynomial(Dim(2), {{{1, 0, 0}, 1.0}}).eval_far({1, 0, 0}, 700.0)));
  CHECK(bump().eval_far({1, 0, 0}, 700.0) == 0.0);
}
