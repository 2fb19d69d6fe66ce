#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fracms/gausskernel.hpp"

using namespace fracms;

namespace {

double Phi(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

Region interval(double a, double b) { return make_box(Dim(1), std::vector<double>{a}, std::vector<double>{b}); }
Region right_half(double at) { return make_halfspace(Dim(1), std::vector<double>{1}, at); }

}  // namespace

TEST_CASE("Gaussian measure and cdf") {
  for (double t : {-3.0, -0.5, 0.0, 1.0, 2.5}) CHECK(GaussianMeasure::cdf(t) == doctest::Approx(Phi(t)).epsilon(1e-14));
  GaussianMeasure g2{2};
  CHECK(g2.density({0, 0, 0}) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
  CHECK(gaussian_measure_1d(right_half(0.0)) == doctest::Approx(0.5));
  CHECK(gaussian_measure_1d(interval(-1, 1)) == doctest::Approx(std::erf(1.0 / std::sqrt(2.0))).epsilon(1e-13));
  CHECK(gaussian_measure_1d(make_complement(interval(-1, 2))) == doctest::Approx(Phi(-1) + 1 - Phi(2)).epsilon(1e-13));
}

TEST_CASE("Mehler kernel: symmetric and a probability kernel against gamma") {
  const MehlerKernel M{0.7, 1};
  CHECK(M({0.3, 0, 0}, {-1.2, 0, 0}) == doctest::Approx(M({-1.2, 0, 0}, {0.3, 0, 0})));
  // int M_t(x, y) dgamma(y) = 1
  for (double x : {-1.0, 0.0, 2.0}) {
    const auto total = integrate_1d(
        [&](double y) {
          const double g = std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi);
          return M({x, 0, 0}, {y, 0, 0}) * g;
        },
        -40.0, 40.0);
    CHECK(total.value == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(M.log_value({0.5, 0, 0}, {0.25, 0, 0}) == doctest::Approx(std::log(M({0.5, 0, 0}, {0.25, 0, 0}))));
}

TEST_CASE("rho_s is symmetric, positive and blows up on the diagonal") {
  const double a = rho_s(Vec{0.1, 0, 0}, Vec{0.9, 0, 0}, 0.3, Dim(1));
  const double b = rho_s(Vec{0.9, 0, 0}, Vec{0.1, 0, 0}, 0.3, Dim(1));
  CHECK(a > 0.0);
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
  CHECK(rho_s(Vec{0.1, 0, 0}, Vec{0.101, 0, 0}, 0.3, Dim(1)) > a);
  CHECK_THROWS(rho_s(Vec{0.1, 0, 0}, Vec{0.1, 0, 0}, 0.3, Dim(1)));
  CHECK_THROWS(rho_s(Vec{0.1, 0, 0}, Vec{0.2, 0, 0}, 1.3, Dim(1)));
}

TEST_CASE("rho_s against direct quadrature of the time integral") {
  const Vec x{0.4, 0, 0}, y{-0.3, 0, 0};
  const double s = 0.5;
  Integrate1dOptions o;
  o.tail_exponent = s / 2;
  o.abs_tol = 1e-300;
  const auto direct = integrate_1d(
      [&](double t) { return MehlerKernel{t, 1}(x, y) * std::pow(t, -s / 2 - 1); }, 1e-12, INFINITY, o);
  CHECK(rho_s(x, y, s, Dim(1)) == doctest::Approx(direct.value).epsilon(1e-6));
}

TEST_CASE("closed-form Gaussian limit against the normal cdf") {
  const Region E = right_half(0.0), omega = interval(-1, 1);
  const double expected = 2.0 * (0.5 * (Phi(0) - Phi(-1)) + (Phi(1) - Phi(0)) * Phi(-1));
  CHECK(gauss_limit_closed_form(E, omega) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(gauss_limit_dominated(E, omega, Dim(1)) == doctest::Approx(expected).epsilon(1e-8));

  // Shifted cut: gamma(E) = 1 - Phi(a).
  const Region E2 = right_half(0.4);
  const double g_e = 1 - Phi(0.4), g_om_not_e = Phi(0.4) - Phi(-1), g_e_om = Phi(1) - Phi(0.4), g_ec_omc = Phi(-1);
  CHECK(gauss_limit_closed_form(E2, omega) ==
        doctest::Approx(2.0 * (g_e * g_om_not_e + g_e_om * g_ec_omc)).epsilon(1e-13));
}

TEST_CASE("s P^gamma_s approaches the closed form") {
  const Region E = right_half(0.0), omega = interval(-1, 1);
  const double limit = gauss_limit_closed_form(E, omega);
  const double a = 0.02 * gauss_perimeter(E, omega, 0.02, Dim(1), QuadratureSpec{}).value;
  const double b = 0.002 * gauss_perimeter(E, omega, 0.002, Dim(1), QuadratureSpec{}).value;
  CHECK(std::abs(b - limit) < std::abs(a - limit));
  CHECK(b == doctest::Approx(limit).epsilon(0.01));
}

TEST_CASE("property: s rho_s tends to 2 off the diagonal") {
  const double pts[] = {-1.5, -0.6, 0.1, 0.8, 1.7};
  double worst = 0.0;
  for (double x : pts)
    for (double y : pts) {
      if (x == y) continue;
      const Vec a{x, 0, 0}, b{y, 0, 0};
      const double s1 = 2e-3, s2 = 1e-3;
      const double g1 = s1 * rho_s(a, b, s1, Dim(1)), g2 = s2 * rho_s(a, b, s2, Dim(1));
      worst = std::max(worst, std::abs(2.0 * g2 - g1 - 2.0));  // linear extrapolation to s = 0
    }
  CHECK(worst < 1e-3);
}

TEST_CASE("property: closed form equals the dominated-convergence expression") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    double w[4];
    double sum = 0.0;
    for (double& v : w) sum += (v = U(rng));
    for (double& v : w) v /= sum;
    const double a = w[0], b = w[1], c = w[2], dd = w[3];
    CHECK((a + b) * (c + dd) - b * dd == doctest::Approx((a + b) * c + a * dd).epsilon(1e-12));
  }
}

TEST_CASE("trivial sets have zero Gaussian perimeter") {
  const Region omega = interval(-1, 1);
  const Region all = make_union({right_half(0.0), make_complement(right_half(0.0))});
  const Region none = make_complement(all);
  CHECK(gauss_perimeter(all, omega, 0.1, Dim(1), QuadratureSpec{}).value == doctest::Approx(0.0).scale(1.0));
  CHECK(gauss_perimeter(none, omega, 0.1, Dim(1), QuadratureSpec{}).value == doctest::Approx(0.0).scale(1.0));
}
