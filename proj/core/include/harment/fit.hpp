#pragma once

#include <span>

namespace harment {

/// Ordinary least-squares line y = slope * x + intercept.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
  double rms_residual = 0.0;
  double max_residual = 0.0;
};

/// Requires at least two points with distinct x. R² is 1 for data with zero
/// variance that the line reproduces exactly.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace harment
