#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fracms/quad.hpp"

using namespace fracms;

TEST_CASE("integrate_1d: smooth integrands match antiderivatives") {
  const auto r = integrate_1d([](double x) { return 3.0 * x * x - x + 2.0; }, -1.0, 2.0);
  CHECK(r.value == doctest::Approx(9.0 - 1.5 + 6.0).epsilon(1e-14));

  const auto c = integrate_1d([](double x) { return std::cos(x); }, 0.0, 10.0);
  CHECK(c.value == doctest::Approx(std::sin(10.0)).epsilon(1e-11));
  CHECK(c.error <= 1e-9);
}

TEST_CASE("integrate_1d: endpoint singularities through substitution") {
  // int_0^1 x^{-1/2} = 2, int_0^1 x^{-0.9} = 10
  const auto a = integrate_1d([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, -0.5);
  CHECK(a.value == doctest::Approx(2.0).epsilon(1e-10));
  const auto a9 = integrate_1d([](double x) { return std::pow(x, -0.9); }, 0.0, 1.0, -0.9);
  CHECK(a9.value == doctest::Approx(10.0).epsilon(1e-8));

  // Right end: 1 - x loses everything below one ulp of 1, worth about 2 sqrt(1e-16).
  Integrate1dOptions o;
  o.right_exponent = -0.5;
  const auto b = integrate_1d([](double x) { return 1.0 / std::sqrt(1.0 - x); }, 0.0, 1.0, o);
  CHECK(b.value == doctest::Approx(2.0).epsilon(1e-7));

  // Both ends: int_0^1 x^{-1/2} (1-x)^{-1/2} = pi
  Integrate1dOptions both;
  both.left_exponent = -0.5;
  both.right_exponent = -0.5;
  const auto c = integrate_1d([](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); }, 0.0, 1.0, both);
  CHECK(c.value == doctest::Approx(std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("integrate_1d: infinite upper limit") {
  Integrate1dOptions o;
  o.tail_exponent = 1.0;
  const auto a = integrate_1d([](double x) { return 1.0 / (x * x); }, 1.0, INFINITY, o);
  CHECK(a.value == doctest::Approx(1.0).epsilon(1e-10));

  // Slow power tail: int_1^inf x^{-1-0.01} = 100
  o.tail_exponent = 0.01;
  const auto b = integrate_1d([](double x) { return std::pow(x, -1.01); }, 1.0, INFINITY, o);
  CHECK(b.value == doctest::Approx(100.0).epsilon(1e-8));

  const auto e = integrate_1d([](double x) { return std::exp(-x); }, 0.0, INFINITY, Integrate1dOptions{});
  CHECK(e.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("integrate_1d: error estimate scales with the panel width") {
  // A log singularity on a tiny interval must converge, not stall.
  const double h = 1e-9;
  Integrate1dOptions o;
  o.abs_tol = 1e-300;
  const auto r = integrate_1d([](double x) { return -std::log(x); }, 0.0, h, o);
  CHECK(r.value == doctest::Approx(h * (1.0 - std::log(h))).epsilon(1e-8));
}

TEST_CASE("integrate_1d: invalid input") {
  auto f = [](double x) { return x; };
  CHECK_THROWS_AS(integrate_1d(f, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_1d(f, -INFINITY, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_1d(f, 0.0, 1.0, -1.0), std::invalid_argument);
  CHECK_THROWS(integrate_1d([](double) { return NAN; }, 0.0, 1.0));
}

TEST_CASE("EstimateWithError arithmetic") {
  const auto a = EstimateWithError::statistical(1.0, 0.3);
  const auto b = EstimateWithError::analytic(2.0, 0.4);
  const auto c = a + b;
  CHECK(c.value == 3.0);
  CHECK(c.error == doctest::Approx(0.5));
  CHECK(c.kind == ErrorKind::statistical);
  const auto e = EstimateWithError::exact(1.0) + EstimateWithError::exact(2.0);
  CHECK(e.kind == ErrorKind::exact);
  CHECK(e.error == 0.0);
  const auto m = -2.0 * a;
  CHECK(m.value == -2.0);
  CHECK(m.error == doctest::Approx(0.6));
  CHECK(error_kind_from_string(to_string(ErrorKind::analytic)) == ErrorKind::analytic);
  CHECK_THROWS(error_kind_from_string("fuzzy"));
}

TEST_CASE("QuadratureSpec validation") {
  QuadratureSpec q;
  CHECK_NOTHROW(q.validate());
  q.sample_budget = 999;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q.sample_budget = 10001;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q.sample_budget = 10000;
  q.batch_count = 1;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q.batch_count = 20;
  q.target_rel_error = 0.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}

TEST_CASE("mc_integrate: unbiased within statistical error") {
  // int over [0,1]^2 x [0,1]^2 of x1 * y2 = 1/4
  UniformBoxPairSampler sampler({0, 0, 0}, {1, 1, 0}, Dim(2));
  QuadratureSpec q;
  q.sample_budget = 200000;
  const auto e = mc_double_integral([](const Vec& x, const Vec& y) { return x[0] * y[1]; }, sampler, q);
  CHECK(e.kind == ErrorKind::statistical);
  CHECK(e.error > 0.0);
  CHECK(std::abs(e.value - 0.25) < 5.0 * e.error);
}

TEST_CASE("mc_integrate: power-law sampler density normalization") {
  // With g = density the estimate is exactly 1 per sample.
  PowerLawPairSampler sampler({-1, -1, 0}, {1, 1, 0}, Dim(2), 2.5, 0.01, 3.0);
  QuadratureSpec q;
  q.sample_budget = 20000;
  const auto e = mc_double_integral(
      [&](const Vec& x, const Vec& y) { return sampler.density(x, y); }, sampler, q);
  CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));

  // Independent check of the radial normalization: int |z|^{-2.5} over the
  // annulus = 2 pi (r_min^{-0.5} - r_max^{-0.5}) / 0.5; box volume 4.
  const double annulus = 2.0 * std::numbers::pi * (std::pow(0.01, -0.5) - std::pow(3.0, -0.5)) / 0.5;
  const double dens = sampler.density({0.2, 0.1, 0}, {0.7, 0.1, 0});
  CHECK(dens == doctest::Approx(std::pow(0.5, -2.5) / annulus / 4.0).epsilon(1e-12));
}

TEST_CASE("mc_integrate: reproducible for a seed, independent of thread count") {
  DirectionPairSampler sampler({0, 0, 0}, {1, 1, 0}, Dim(2));
  QuadratureSpec q;
  q.sample_budget = 40000;
  auto g = [](const Vec& x, const Vec& th) { return x[0] * th[0] * th[0]; };
  set_thread_count(1);
  const auto a = mc_double_integral(g, sampler, q);
  set_thread_count(4);
  const auto b = mc_double_integral(g, sampler, q);
  set_thread_count(0);
  CHECK(a.value == b.value);
  CHECK(a.error == b.error);
  q.rng_seed += 1;
  const auto c = mc_double_integral(g, sampler, q);
  CHECK(c.value != a.value);
  // E[x1] E[cos^2] * |box| * |S^1| = 1/2 * 1/2 * 1 * 2 pi
  CHECK(std::abs(a.value - std::numbers::pi / 2.0) < 5.0 * a.error);
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(257, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS(parallel_for(8, [](std::size_t i) {
    if (i == 5) throw std::runtime_error("boom");
  }));
}
