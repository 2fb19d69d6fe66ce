#include "fracms/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace fracms {

std::string to_string(FitModel m) { return m == FitModel::affine ? "affine" : "log_corrected"; }

std::vector<double> geometric_grid(double s_max, double s_min, std::size_t n) {
  if (n < 2 || !(s_max > s_min) || !(s_min > 0.0)) throw std::invalid_argument("bad geometric grid bounds");
  std::vector<double> g(n);
  const double ratio = std::pow(s_min / s_max, 1.0 / static_cast<double>(n - 1));
  for (std::size_t i = 0; i < n; ++i) g[i] = s_max * std::pow(ratio, static_cast<double>(i));
  g.back() = s_min;
  return g;
}

void validate_s_grid(const std::vector<double>& g) {
  if (g.size() < 5) throw std::invalid_argument("s grid needs at least 5 points");
  for (double s : g)
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s out of (0,1)");
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    if (!(g[i + 1] < g[i])) throw std::invalid_argument("s grid must be strictly decreasing");
  const double r0 = g[1] / g[0];
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
    if (std::abs(g[i + 1] / g[i] - r0) > 1e-6 * r0) throw std::invalid_argument("s grid must be geometric");
}

namespace {

struct Fit {
  double limit = 0.0;
  double se = 0.0;
  double chi2_red = 0.0;
  std::size_t n = 0;
  FitModel model = FitModel::affine;
};

double sigma_of(const EstimateWithError& e) {
  const double floor = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(e.value);
  return std::max({e.error, floor, 1e-300});
}

// pts sorted by increasing s; uses the first n.
Fit fit(const std::vector<SweepPoint>& pts, std::size_t n, FitModel model) {
  const int k = model == FitModel::affine ? 2 : 3;
  Eigen::MatrixXd A(static_cast<Eigen::Index>(n), k);
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  // Column scaling keeps the normal matrix well conditioned for tiny s.
  const double smax = pts[n - 1].s;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = pts[i].s;
    const double w = 1.0 / sigma_of(pts[i].estimate);
    const auto r = static_cast<Eigen::Index>(i);
    A(r, 0) = w;
    A(r, 1) = w * s / smax;
    if (k == 3) A(r, 2) = w * s * std::log(1.0 / s) / (smax * std::log(1.0 / smax) + 1e-300);
    b(r) = w * pts[i].estimate.value;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  const Eigen::VectorXd x = qr.solve(b);
  const Eigen::MatrixXd cov = (A.transpose() * A).inverse();
  Fit f;
  f.model = model;
  f.n = n;
  f.limit = x(0);
  f.se = std::sqrt(std::max(cov(0, 0), 0.0));
  const double chi2 = (A * x - b).squaredNorm();
  const int dof = static_cast<int>(n) - k;
  f.chi2_red = dof > 0 ? chi2 / dof : 0.0;
  return f;
}

// Largest consistent window (chi2_red <= 4), else the best-fitting window.
Fit best_window(const std::vector<SweepPoint>& pts, FitModel model, bool& consistent) {
  const std::size_t k = model == FitModel::affine ? 2 : 3;
  const std::size_t min_n = std::min(pts.size(), k + 2);
  Fit best;
  bool have = false;
  consistent = false;
  for (std::size_t n = pts.size(); n >= min_n && n > k; --n) {
    Fit f = fit(pts, n, model);
    if (f.chi2_red <= 4.0) {
      consistent = true;
      return f;
    }
    if (!have || f.chi2_red < best.chi2_red) {
      best = f;
      have = true;
    }
  }
  return best;
}

}  // namespace

SSweepResult extrapolate(std::vector<SweepPoint> points) {
  if (points.size() < 5) throw std::invalid_argument("extrapolation needs at least 5 points");
  for (const SweepPoint& p : points)
    if (!std::isfinite(p.estimate.value) || !std::isfinite(p.estimate.error))
      throw std::runtime_error("non-finite evaluation at s = " + std::to_string(p.s));
  std::vector<SweepPoint> asc = points;
  std::sort(asc.begin(), asc.end(), [](const SweepPoint& a, const SweepPoint& b) { return a.s < b.s; });

  bool ca = false, cl = false;
  const Fit fa = best_window(asc, FitModel::affine, ca);
  const Fit fl = best_window(asc, FitModel::log_corrected, cl);
  const Fit* chosen;
  if (ca && cl) {
    chosen = fl.n > fa.n ? &fl : &fa;
  } else if (ca || cl) {
    chosen = ca ? &fa : &fl;
  } else {
    chosen = fl.chi2_red < fa.chi2_red ? &fl : &fa;
  }

  SSweepResult r;
  r.points = std::move(points);
  r.limit = chosen->limit;
  r.fit_model = chosen->model;
  r.window = chosen->n;
  r.residual = std::sqrt(chosen->chi2_red);
  r.clean = r.residual <= 10.0;
  double floor = 0.0;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, asc.size()); ++i) floor = std::max(floor, asc[i].estimate.error);
  r.limit_error = std::max(chosen->se * std::max(1.0, r.residual), floor);
  return r;
}

SSweepResult sweep(const std::function<EstimateWithError(double)>& evaluator, const std::vector<double>& s_grid) {
  validate_s_grid(s_grid);
  std::vector<SweepPoint> pts(s_grid.size());
  parallel_for(s_grid.size(), [&](std::size_t i) { pts[i] = {s_grid[i], evaluator(s_grid[i])}; });
  return extrapolate(std::move(pts));
}

}  // namespace fracms
