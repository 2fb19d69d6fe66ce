#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracms/vec.hpp"

namespace fracms {

enum class ErrorKind { exact, analytic, statistical };

std::string to_string(ErrorKind kind);
ErrorKind error_kind_from_string(const std::string& name);

/// A value with a 1-sigma (statistical) or bounding (analytic) error.
struct EstimateWithError {
  double value = 0.0;
  double error = 0.0;
  ErrorKind kind = ErrorKind::exact;

  static EstimateWithError exact(double v) { return {v, 0.0, ErrorKind::exact}; }
  static EstimateWithError analytic(double v, double e) { return {v, e, ErrorKind::analytic}; }
  static EstimateWithError statistical(double v, double e) { return {v, e, ErrorKind::statistical}; }
};

/// Sum of two estimates; errors add in quadrature and the weaker kind wins.
EstimateWithError operator+(const EstimateWithError& a, const EstimateWithError& b);
EstimateWithError operator*(double c, const EstimateWithError& a);

struct QuadratureSpec {
  std::uint64_t sample_budget = 100000;
  std::uint64_t rng_seed = 0x5eed;
  double target_rel_error = 1e-3;
  std::uint32_t batch_count = 20;

  /// Throws std::invalid_argument when the invariants fail.
  void validate() const;
  std::uint64_t samples_per_batch() const { return sample_budget / batch_count; }
};

// ---------------------------------------------------------------------------
// Deterministic 1-D quadrature

struct Integrate1dOptions {
  /// Integrand behaves like (x-a)^left_exponent near a (must be > -1).
  double left_exponent = 0.0;
  /// Integrand behaves like (b-x)^right_exponent near b (must be > -1).
  double right_exponent = 0.0;
  /// For b = +inf: integrand decays like x^{-1-tail_exponent} (must be > 0).
  double tail_exponent = 1.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
  /// Cap on subintervals of the global adaptive refinement.
  unsigned max_intervals = 2000;
  /// Refinement that ends with error > fail_rel_tol * L1 norm is an error.
  double fail_rel_tol = 1e-5;
};

/// Adaptive Gauss-Kronrod quadrature on [a, b] (b may be +inf) with
/// power substitutions absorbing declared endpoint singularities.
EstimateWithError integrate_1d(const std::function<double(double)>& f, double a, double b,
                               const Integrate1dOptions& opts = {});

EstimateWithError integrate_1d(const std::function<double(double)>& f, double a, double b,
                               double endpoint_singularity_exponent);

// ---------------------------------------------------------------------------
// Seeded Monte Carlo

using Rng = std::mt19937_64;

/// Derives the generator for one batch from (seed, batch_index).
Rng batch_rng(std::uint64_t seed, std::uint64_t batch_index);

struct PairSample {
  Vec x{};
  Vec y{};
  double density = 0.0;
};

/// Draws (x, y) pairs with a closed-form joint density.
class PairSampler {
 public:
  virtual ~PairSampler() = default;
  virtual PairSample sample(Rng& rng) const = 0;
  virtual double density(const Vec& x, const Vec& y) const = 0;
};

/// x and y independently uniform in the box [lo, hi]^d.
class UniformBoxPairSampler final : public PairSampler {
 public:
  UniformBoxPairSampler(Vec lo, Vec hi, Dim d);
  PairSample sample(Rng& rng) const override;
  double density(const Vec& x, const Vec& y) const override;

 private:
  Vec lo_, hi_;
  int d_;
  double inv_volume_;
};

/// x uniform in [lo, hi]^d, y = x + z with |z| in [r_min, r_max] and
/// density of z proportional to |z|^{-exponent}.
class PowerLawPairSampler final : public PairSampler {
 public:
  PowerLawPairSampler(Vec lo, Vec hi, Dim d, double exponent, double r_min, double r_max);
  PairSample sample(Rng& rng) const override;
  double density(const Vec& x, const Vec& y) const override;

 private:
  Vec lo_, hi_;
  int d_;
  double exponent_, r_min_, r_max_;
  double inv_box_volume_;
  double radial_norm_;  // integral of r^{d-1-exponent} over [r_min, r_max] times sphere measure
};

/// x uniform in [lo, hi]^d, y a uniformly distributed unit direction.
class DirectionPairSampler final : public PairSampler {
 public:
  DirectionPairSampler(Vec lo, Vec hi, Dim d);
  PairSample sample(Rng& rng) const override;
  double density(const Vec& x, const Vec& y) const override;

 private:
  Vec lo_, hi_;
  int d_;
  double inv_volume_;
};

Vec uniform_in_box(const Vec& lo, const Vec& hi, int d, Rng& rng);
Vec uniform_direction(int d, Rng& rng);

/// Worker count: FRACMS_THREADS if set, else the hardware concurrency.
unsigned default_thread_count();
void set_thread_count(unsigned n);

/// Runs task(i) for i in [0, n) on the worker pool; blocks until done.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

/// Batched importance-sampling estimate of K integrals at once.
///
/// Each batch draws samples_per_batch() pairs from its own generator, so the
/// result depends only on (seed, budget, batch_count). Batch means are reduced
/// in index order; the error is the standard error of the batch means.
template <std::size_t K>
std::array<EstimateWithError, K> mc_integrate(
    const std::function<std::array<double, K>(const PairSample&)>& g, const PairSampler& sampler,
    const QuadratureSpec& spec) {
  spec.validate();
  const std::size_t batches = spec.batch_count;
  const std::uint64_t per_batch = spec.samples_per_batch();
  std::vector<std::array<double, K>> means(batches);
  parallel_for(batches, [&](std::size_t b) {
    Rng rng = batch_rng(spec.rng_seed, b);
    std::array<double, K> acc{};
    for (std::uint64_t i = 0; i < per_batch; ++i) {
      const PairSample smp = sampler.sample(rng);
      if (!(smp.density > 0.0)) throw std::runtime_error("mc_integrate: zero effective samples");
      const auto v = g(smp);
      for (std::size_t k = 0; k < K; ++k) {
        if (!std::isfinite(v[k])) throw std::runtime_error("mc_integrate: non-finite sample value");
        acc[k] += v[k] / smp.density;
      }
    }
    for (std::size_t k = 0; k < K; ++k) means[b][k] = acc[k] / static_cast<double>(per_batch);
  });

  std::array<EstimateWithError, K> out;
  for (std::size_t k = 0; k < K; ++k) {
    double sum = 0.0;
    for (std::size_t b = 0; b < batches; ++b) sum += means[b][k];
    const double mean = sum / static_cast<double>(batches);
    double ss = 0.0;
    for (std::size_t b = 0; b < batches; ++b) ss += (means[b][k] - mean) * (means[b][k] - mean);
    const double var = ss / static_cast<double>(batches - 1);
    out[k] = EstimateWithError::statistical(mean, std::sqrt(var / static_cast<double>(batches)));
  }
  return out;
}

/// Single-integral form of mc_integrate over pair functions g(x, y).
EstimateWithError mc_double_integral(const std::function<double(const Vec&, const Vec&)>& g,
                                     const PairSampler& sampler, const QuadratureSpec& spec);

}  // namespace fracms
