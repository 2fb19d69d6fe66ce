#include "fracms/quad.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <queue>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fracms {

std::string to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::exact: return "exact";
    case ErrorKind::analytic: return "analytic";
    case ErrorKind::statistical: return "statistical";
  }
  return "unknown";
}

ErrorKind error_kind_from_string(const std::string& name) {
  if (name == "exact") return ErrorKind::exact;
  if (name == "analytic") return ErrorKind::analytic;
  if (name == "statistical") return ErrorKind::statistical;
  throw std::invalid_argument("unknown error kind '" + name + "'");
}

EstimateWithError operator+(const EstimateWithError& a, const EstimateWithError& b) {
  EstimateWithError r;
  r.value = a.value + b.value;
  r.kind = std::max(a.kind, b.kind);
  r.error = r.kind == ErrorKind::exact ? 0.0 : std::hypot(a.error, b.error);
  return r;
}

EstimateWithError operator*(double c, const EstimateWithError& a) {
  return {c * a.value, std::abs(c) * a.error, a.kind};
}

void QuadratureSpec::validate() const {
  if (sample_budget < 1000) throw std::invalid_argument("sample_budget must be >= 1000");
  if (batch_count < 2) throw std::invalid_argument("batch_count must be >= 2");
  if (sample_budget % batch_count != 0)
    throw std::invalid_argument("batch_count must divide sample_budget");
  if (!(target_rel_error > 0.0 && target_rel_error < 1.0))
    throw std::invalid_argument("target_rel_error must lie in (0,1)");
}

// ---------------------------------------------------------------------------

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

struct Partial {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

Partial gk_panel(const std::function<double(double)>& g, double a, double b) {
  Partial p;
  p.value = GK::integrate(g, a, b, 0, 0.0, &p.error, &p.l1);
  // Without recursion Boost reports |K - G| on the reference interval [-1, 1].
  p.error *= 0.5 * (b - a);
  if (!std::isfinite(p.value)) throw std::runtime_error("integrate_1d: non-finite integral");
  return p;
}

// Global adaptive refinement: always bisect the panel with the largest error
// estimate until the summed error meets max(rel_tol |I|, abs_tol).
Partial gk(const std::function<double(double)>& g, double a, double b, const Integrate1dOptions& o) {
  Partial total;
  if (!(b > a)) return total;
  struct Panel {
    double a, b;
    Partial p;
    bool operator<(const Panel& other) const { return p.error < other.p.error; }
  };
  std::priority_queue<Panel> heap;
  heap.push({a, b, gk_panel(g, a, b)});
  total = heap.top().p;
  while (heap.size() < o.max_intervals && total.error > std::max(o.rel_tol * std::abs(total.value), o.abs_tol)) {
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const Partial l = gk_panel(g, worst.a, mid), r = gk_panel(g, mid, worst.b);
    heap.push({worst.a, mid, l});
    heap.push({mid, worst.b, r});
    total.value += l.value + r.value - worst.p.value;
    total.error += l.error + r.error - worst.p.error;
    total.l1 += l.l1 + r.l1 - worst.p.l1;
  }
  // Re-sum to drop accumulated rounding from the running updates.
  Partial exact;
  while (!heap.empty()) {
    const Partial& q = heap.top().p;
    exact.value += q.value;
    exact.error += q.error;
    exact.l1 += q.l1;
    heap.pop();
  }
  return exact;
}

// Integrand on [a, b] with (x-a)^beta at a, absorbed by x = a + (b-a) w^{1/(1+beta)}.
Partial left_singular(const std::function<double(double)>& f, double a, double b, double beta,
                      const Integrate1dOptions& o) {
  if (beta == 0.0) return gk(f, a, b, o);
  const double q = 1.0 / (1.0 + beta);
  const double h = b - a;
  auto g = [&](double w) {
    if (w <= 0.0) return 0.0;
    const double x = a + h * std::pow(w, q);
    if (!(x > a)) return 0.0;
    return f(x) * h * q * std::pow(w, q - 1.0);
  };
  return gk(g, 0.0, 1.0, o);
}

Partial right_singular(const std::function<double(double)>& f, double a, double b, double beta,
                       const Integrate1dOptions& o) {
  if (beta == 0.0) return gk(f, a, b, o);
  auto mirrored = [&](double x) {
    const double y = a + b - x;
    return y < b ? f(y) : 0.0;  // rounded onto the singular end
  };
  return left_singular(mirrored, a, b, beta, o);
}

// Integrand on [a, inf) with a > 0, decaying like x^{-1-kappa}: x = a w^{-1/kappa}.
Partial tail(const std::function<double(double)>& f, double a, double kappa, const Integrate1dOptions& o) {
  auto g = [&](double w) {
    if (w <= 0.0) return 0.0;
    const double x = a * std::pow(w, -1.0 / kappa);
    if (!std::isfinite(x)) return 0.0;
    return f(x) * (a / kappa) * std::pow(w, -1.0 / kappa - 1.0);
  };
  return gk(g, 0.0, 1.0, o);
}

std::string format_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Partial add(Partial p, const Partial& q) {
  p.value += q.value;
  p.error += q.error;
  p.l1 += q.l1;
  return p;
}

}  // namespace

EstimateWithError integrate_1d(const std::function<double(double)>& f, double a, double b,
                               const Integrate1dOptions& o) {
  if (!(a < b)) throw std::invalid_argument("integrate_1d: need a < b");
  if (!std::isfinite(a)) throw std::invalid_argument("integrate_1d: a must be finite");
  if (o.left_exponent <= -1.0 || o.right_exponent <= -1.0)
    throw std::invalid_argument("integrate_1d: endpoint exponent must exceed -1");

  Partial total;
  if (std::isinf(b)) {
    if (!(o.tail_exponent > 0.0)) throw std::invalid_argument("integrate_1d: tail exponent must be > 0");
    const double split = a > 0.0 ? 2.0 * a : a + 1.0;
    total = add(left_singular(f, a, split, o.left_exponent, o), tail(f, split, o.tail_exponent, o));
  } else if (o.left_exponent != 0.0 && o.right_exponent != 0.0) {
    const double m = 0.5 * (a + b);
    total = add(left_singular(f, a, m, o.left_exponent, o), right_singular(f, m, b, o.right_exponent, o));
  } else if (o.right_exponent != 0.0) {
    total = right_singular(f, a, b, o.right_exponent, o);
  } else {
    total = left_singular(f, a, b, o.left_exponent, o);
  }

  const double eps = std::numeric_limits<double>::epsilon();
  if (total.error > std::max(o.fail_rel_tol * total.l1, o.abs_tol))
    throw std::runtime_error("integrate_1d: refinement did not converge on [" + format_short(a) + ", " +
                             format_short(b) + "] (error " + format_short(total.error) + ", L1 " +
                             format_short(total.l1) + ")");
  if (total.error <= 64.0 * eps * total.l1) return EstimateWithError::exact(total.value);
  return EstimateWithError::analytic(total.value, total.error);
}

EstimateWithError integrate_1d(const std::function<double(double)>& f, double a, double b,
                               double endpoint_singularity_exponent) {
  Integrate1dOptions o;
  if (std::isinf(b)) {
    // For an infinite interval the exponent describes the decay x^{exponent}.
    o.tail_exponent = -1.0 - endpoint_singularity_exponent;
  } else {
    o.left_exponent = endpoint_singularity_exponent;
  }
  return integrate_1d(f, a, b, o);
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(Rng& rng) {
  // 53 random bits, never exactly 0.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double box_volume(const Vec& lo, const Vec& hi, int d) {
  double v = 1.0;
  for (int i = 0; i < d; ++i) {
    if (!(hi[i] > lo[i])) throw std::invalid_argument("sampler box must satisfy lo < hi");
    v *= hi[i] - lo[i];
  }
  return v;
}

bool in_box(const Vec& x, const Vec& lo, const Vec& hi, int d) {
  for (int i = 0; i < d; ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

double sphere_area(int d) { return d == 1 ? 2.0 : d == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi; }

}  // namespace

Rng batch_rng(std::uint64_t seed, std::uint64_t batch_index) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(batch_index + 0x632be59bd9b4e019ULL)));
}

Vec uniform_in_box(const Vec& lo, const Vec& hi, int d, Rng& rng) {
  Vec x{0.0, 0.0, 0.0};
  for (int i = 0; i < d; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * uniform01(rng);
  return x;
}

Vec uniform_direction(int d, Rng& rng) {
  if (d == 1) return {uniform01(rng) < 0.5 ? -1.0 : 1.0, 0.0, 0.0};
  if (d == 2) {
    const double t = 2.0 * std::numbers::pi * uniform01(rng);
    return {std::cos(t), std::sin(t), 0.0};
  }
  const double z = 2.0 * uniform01(rng) - 1.0;
  const double t = 2.0 * std::numbers::pi * uniform01(rng);
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {rho * std::cos(t), rho * std::sin(t), z};
}

UniformBoxPairSampler::UniformBoxPairSampler(Vec lo, Vec hi, Dim d)
    : lo_(lo), hi_(hi), d_(d), inv_volume_(0.0) {
  const double v = box_volume(lo, hi, d_);
  inv_volume_ = 1.0 / (v * v);
}

PairSample UniformBoxPairSampler::sample(Rng& rng) const {
  PairSample s;
  s.x = uniform_in_box(lo_, hi_, d_, rng);
  s.y = uniform_in_box(lo_, hi_, d_, rng);
  s.density = inv_volume_;
  return s;
}

double UniformBoxPairSampler::density(const Vec& x, const Vec& y) const {
  return in_box(x, lo_, hi_, d_) && in_box(y, lo_, hi_, d_) ? inv_volume_ : 0.0;
}

PowerLawPairSampler::PowerLawPairSampler(Vec lo, Vec hi, Dim d, double exponent, double r_min, double r_max)
    : lo_(lo), hi_(hi), d_(d), exponent_(exponent), r_min_(r_min), r_max_(r_max),
      inv_box_volume_(1.0 / box_volume(lo, hi, d)), radial_norm_(0.0) {
  if (!(r_min >= 0.0 && r_max > r_min)) throw std::invalid_argument("power-law sampler needs 0 <= r_min < r_max");
  const double g = d_ - exponent_;
  if (g <= 0.0 && r_min_ == 0.0)
    throw std::invalid_argument("power-law sampler: exponent >= d requires r_min > 0");
  double radial;
  if (g == 0.0) {
    radial = std::log(r_max_ / r_min_);
  } else {
    radial = (std::pow(r_max_, g) - std::pow(r_min_, g)) / g;
  }
  radial_norm_ = sphere_area(d_) * radial;
}

PairSample PowerLawPairSampler::sample(Rng& rng) const {
  PairSample s;
  s.x = uniform_in_box(lo_, hi_, d_, rng);
  const double u = uniform01(rng);
  const double g = d_ - exponent_;
  double r;
  if (g == 0.0) {
    r = r_min_ * std::exp(u * std::log(r_max_ / r_min_));
  } else {
    const double a = std::pow(r_min_, g), b = std::pow(r_max_, g);
    r = std::pow(a + u * (b - a), 1.0 / g);
  }
  const Vec dir = uniform_direction(d_, rng);
  s.y = s.x + r * dir;
  s.density = inv_box_volume_ * std::pow(r, -exponent_) / radial_norm_;
  return s;
}

double PowerLawPairSampler::density(const Vec& x, const Vec& y) const {
  if (!in_box(x, lo_, hi_, d_)) return 0.0;
  const double r = norm(y - x);
  if (r < r_min_ || r > r_max_ || r == 0.0) return 0.0;
  return inv_box_volume_ * std::pow(r, -exponent_) / radial_norm_;
}

DirectionPairSampler::DirectionPairSampler(Vec lo, Vec hi, Dim d)
    : lo_(lo), hi_(hi), d_(d), inv_volume_(1.0 / box_volume(lo, hi, d)) {}

PairSample DirectionPairSampler::sample(Rng& rng) const {
  PairSample s;
  s.x = uniform_in_box(lo_, hi_, d_, rng);
  s.y = uniform_direction(d_, rng);
  s.density = inv_volume_ / sphere_area(d_);
  return s;
}

double DirectionPairSampler::density(const Vec& x, const Vec& y) const {
  if (!in_box(x, lo_, hi_, d_)) return 0.0;
  if (std::abs(norm(y) - 1.0) > 1e-9) return 0.0;
  return inv_volume_ / sphere_area(d_);
}

// ---------------------------------------------------------------------------

namespace {
std::atomic<unsigned> g_threads{0};
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("FRACMS_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_thread_count(unsigned n) { g_threads = n; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task) {
  unsigned workers = g_threads.load();
  if (workers == 0) workers = default_thread_count();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

EstimateWithError mc_double_integral(const std::function<double(const Vec&, const Vec&)>& g,
                                     const PairSampler& sampler, const QuadratureSpec& spec) {
  std::function<std::array<double, 1>(const PairSample&)> wrapped = [&](const PairSample& s) {
    return std::array<double, 1>{g(s.x, s.y)};
  };
  return mc_integrate<1>(wrapped, sampler, spec)[0];
}

}  // namespace fracms
