#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fracms/quad.hpp"

namespace fracms {

enum class FitModel {
  affine,         // L + a s
  log_corrected,  // L + a s + b s ln(1/s)
};

std::string to_string(FitModel m);

struct SweepPoint {
  double s = 0.0;
  EstimateWithError estimate;
};

struct SSweepResult {
  std::vector<SweepPoint> points;  // in grid order (decreasing s)
  double limit = 0.0;
  double limit_error = 0.0;
  FitModel fit_model = FitModel::affine;
  /// sqrt of the reduced chi-square of the selected fit.
  double residual = 0.0;
  /// residual <= 10; false means the data show no clean limit.
  bool clean = true;
  /// Number of smallest-s points used by the selected fit.
  std::size_t window = 0;
};

/// Geometric grid from s_max down to s_min with n points.
std::vector<double> geometric_grid(double s_max, double s_min, std::size_t n);

/// Throws unless the grid has >= 5 strictly decreasing geometric points in (0,1).
void validate_s_grid(const std::vector<double>& s_grid);

/// Fits both models by weighted least squares (weights 1/error^2, with a
/// machine-epsilon floor) on nested windows of the smallest s values.
SSweepResult extrapolate(std::vector<SweepPoint> points);

/// Evaluates every grid point (in parallel) and extrapolates to s = 0.
SSweepResult sweep(const std::function<EstimateWithError(double)>& evaluator, const std::vector<double>& s_grid);

}  // namespace fracms
