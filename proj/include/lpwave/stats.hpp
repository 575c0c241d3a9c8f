#pragma once

#include <span>
#include <vector>

namespace lpwave {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Slope of log(y) against log(x); entries must be positive.
double log_log_slope(std::span<const double> x, std::span<const double> y);

/// Running min/max of a positive quantity.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = true;

  void add(double v);
  /// hi / lo; infinity when lo is zero.
  double width() const;
};

}  // namespace lpwave
