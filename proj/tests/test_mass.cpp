#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracms/mass.hpp"

using namespace fracms;

namespace {

constexpr double kPi = std::numbers::pi;

double sphere_area(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

// s * sum_{k >= 1} int over [k, k + w) of y^{-1-sigma}, both directions, for
// the stripes "1 on [0, w) mod 1" with w = 1/2. Exact per period.
double stripes_at_s(double s, double R, int p) {
  const double sig = s * p;
  auto seg = [&](double a, double b) { return (std::pow(a, -sig) - std::pow(b, -sig)) / sig; };
  double sum = 0.0;
  const long n = 400000;
  for (long k = static_cast<long>(R); k < n; ++k) {
    sum += seg(std::max<double>(k, R), k + 0.5);
    sum += seg(k + 0.5, k + 1.0);
  }
  sum += std::pow(static_cast<double>(n), -sig) / sig;
  return s * sum;
}

}  // namespace

TEST_CASE("alpha_analytic on tail models") {
  for (int d = 1; d <= 3; ++d)
    for (int p = 1; p <= 3; ++p) {
      const auto m = alpha_analytic(make_constant(Dim(d), 1.0), p, Dim(d));
      CHECK(m.value == doctest::Approx(sphere_area(d) / p).epsilon(1e-12));
      CHECK(m.route == MassRoute::analytic);
    }
  CHECK(alpha_analytic(make_constant(Dim(2), -3.0), 2, Dim(2)).value == doctest::Approx(-3.0 * kPi));
  CHECK(alpha_analytic(make_indicator(make_sector_angle(1.2)), 1, Dim(2)).value == doctest::Approx(1.2));

  // Any half-plane, through the origin or not, has mass d omega_d / (2p).
  const Region h = make_halfspace(Dim(2), std::vector<double>{0.6, 0.8}, 5.0);
  CHECK(alpha_analytic(make_indicator(h), 2, Dim(2)).value == doctest::Approx(kPi / 2).epsilon(1e-10));

  // u_inf = sin^2: int over S^1 = pi.
  const Field ra = make_radial_angular(Dim(2), {{{0, 2, 0}, 1.0}}, {{{0, 0, 0}, 1.0}}, RadialProfile::exp, 1.0);
  CHECK(alpha_analytic(ra, 2, Dim(2)).value == doctest::Approx(kPi / 2).epsilon(1e-9));

  const Field bump = make_indicator(make_ball(Dim(2), std::vector<double>{0, 0}, 1.0));
  CHECK(alpha_analytic(bump, 1, Dim(2)).value == 0.0);

  const Field per = make_periodic(1.0, {0.0, 0.5, 1.0}, {1.0, 0.0});
  CHECK(alpha_analytic(per, 2, Dim(1)).value == doctest::Approx(0.5));

  CHECK_THROWS(alpha_analytic(make_indicator(make_shells(Dim(2), ShellPattern::log_dyadic, 1)), 1, Dim(2)));
  CHECK_THROWS(alpha_analytic(make_polynomial(Dim(1), {{{1, 0, 0}, 1.0}}), 1, Dim(1)));
}

TEST_CASE("alpha_at_s matches closed forms for constants and sectors") {
  for (int d = 1; d <= 3; ++d)
    for (double s : {0.3, 0.01, 1e-4}) {
      const double R = 2.0;
      const int p = 2;
      const auto e = alpha_at_s(make_constant(Dim(d), 1.0), p, s, R);
      CHECK(e.value == doctest::Approx(sphere_area(d) * std::pow(R, -s * p) / p).epsilon(1e-12));
    }
  const auto q = alpha_at_s(make_indicator(make_sector_angle(kPi / 3)), 1, 0.05, 1.0);
  CHECK(q.value == doctest::Approx(kPi / 3).epsilon(1e-12));
}

TEST_CASE("alpha_at_s for periodic stripes against per-period sums") {
  const Field per = make_periodic(1.0, {0.0, 0.5, 1.0}, {1.0, 0.0});
  for (double s : {0.05, 0.01}) {
    const auto e = alpha_at_s(per, 2, s, 1.0);
    CHECK(e.value == doctest::Approx(stripes_at_s(s, 1.0, 2)).epsilon(1e-6));
  }
}

TEST_CASE("alpha_at_s of a radial-angular field against direct quadrature") {
  // u = cos(theta) + exp(-r); s int_{r>1} u r^{-1-2s} dr dtheta: the cos part
  // integrates to zero, the exp part is 2 pi s E_{1+2s}(1) style integral.
  const Field ra = make_radial_angular(Dim(2), {{{1, 0, 0}, 1.0}}, {{{0, 0, 0}, 1.0}}, RadialProfile::exp, 1.0);
  const double s = 0.1;
  const auto e = alpha_at_s(ra, 2, s, 1.0);
  const auto radial = integrate_1d([&](double r) { return std::exp(-r) * std::pow(r, -1.0 - 2.0 * s); }, 1.0,
                                   INFINITY, Integrate1dOptions{});
  CHECK(e.value == doctest::Approx(2.0 * kPi * s * radial.value).epsilon(1e-8));
}

TEST_CASE("property: alpha_at_s is linear in the field") {
  const Field a = make_indicator(make_sector_angle(2.0));
  const Field b = make_radial_angular(Dim(2), {{{0, 1, 0}, 1.0}}, {{{0, 0, 0}, 3.0}}, RadialProfile::rational, 1.5);
  for (double s : {0.2, 0.02}) {
    const double lhs = alpha_at_s(make_sum({a, make_scale(b, -2.0)}), 2, s, 1.5).value;
    const double rhs = alpha_at_s(a, 2, s, 1.5).value - 2.0 * alpha_at_s(b, 2, s, 1.5).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("alpha_numeric extrapolates sector and constant masses") {
  const auto r = alpha_numeric(make_indicator(make_sector_angle(kPi / 2)), 1, Dim(2), default_alpha_grid(), 1.0,
                               QuadratureSpec{});
  CHECK(r.limit == doctest::Approx(kPi / 2).epsilon(1e-6));
  const auto m = mass_from_sweep(r, 1);
  CHECK(m.route == MassRoute::numeric);
  CHECK(m.p == 1);
  CHECK(m.value == r.limit);

  const Field one = make_constant(Dim(3), 1.0);
  const auto c = alpha_numeric(one, 2, Dim(3), default_alpha_grid(), 3.0, QuadratureSpec{});
  CHECK(c.limit == doctest::Approx(2.0 * kPi).epsilon(1e-4));
}

TEST_CASE("alpha_translated: exact invariance for constants, small drift otherwise") {
  const std::vector<double> x{2.0, -1.0};
  const Field one = make_constant(Dim(2), 1.0);
  CHECK(alpha_translated(one, 2, Dim(2), x, 10.0, 1e-3, QuadratureSpec{}).value ==
        doctest::Approx(alpha_at_s(one, 2, 1e-3, 10.0).value).epsilon(1e-13));

  const Field q = make_indicator(make_sector_angle(kPi / 2));
  const double a0 = alpha_at_s(q, 2, 1e-3, 10.0).value;
  const double ax = alpha_translated(q, 2, Dim(2), x, 10.0, 1e-3, QuadratureSpec{}).value;
  // Drift bounded by (d + sp)|x|/R times the mass of |u|.
  CHECK(std::abs(ax - a0) <= (2.0 + 2e-3) * std::sqrt(5.0) / 10.0 * a0);
  CHECK_THROWS(alpha_translated(q, 2, Dim(3), std::vector<double>{0, 0, 0}, 10.0, 1e-3, QuadratureSpec{}));
}

TEST_CASE("alpha_at_s input validation") {
  const Field one = make_constant(Dim(1), 1.0);
  CHECK_THROWS_AS(alpha_at_s(one, 2, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(alpha_at_s(one, 2, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(alpha_at_s(one, 0, 0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(alpha_at_s(one, 2, 0.1, -1.0), std::invalid_argument);
}

TEST_CASE("property: 2 alpha_2 = alpha_1 for indicators") {
  for (double th : {0.3, 1.0, 4.0}) {
    const Field chi = make_indicator(make_sector_angle(th));
    CHECK(2.0 * alpha_analytic(chi, 2, Dim(2)).value == doctest::Approx(alpha_analytic(chi, 1, Dim(2)).value));
  }
  const Field half = make_indicator(make_halfspace(Dim(3), std::vector<double>{0, 0, 1}, 0.0));
  CHECK(2.0 * alpha_analytic(half, 2, Dim(3)).value == doctest::Approx(alpha_analytic(half, 1, Dim(3)).value));
}
