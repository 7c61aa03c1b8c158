#pragma once

#include <span>
#include <vector>

namespace gpprec {

double median(std::vector<double> values);

/// Ordinary least squares fit y = slope * x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Needs at least two points with distinct x. R^2 is 1 when y is constant.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Slope of log(y) against log(x).
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace gpprec
