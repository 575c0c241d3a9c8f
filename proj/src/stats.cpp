#include "lpwave/stats.hpp"

#include <boost/math/statistics/linear_regression.hpp>

#include <cmath>
#include <limits>

#include "lpwave/errors.hpp"

namespace lpwave {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DimensionError("line fit needs two equally long samples of length >= 2");
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  auto [c0, c1] = boost::math::statistics::simple_ordinary_least_squares(xs, ys);
  return {c0, c1};
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  lx.reserve(x.size());
  ly.reserve(y.size());
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("log-log fit of a nonpositive value");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_line(lx, ly).slope;
}

void Bracket::add(double v) {
  if (empty) {
    lo = hi = v;
    empty = false;
    return;
  }
  lo = std::min(lo, v);
  hi = std::max(hi, v);
}

double Bracket::width() const {
  if (empty) return 1.0;
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace lpwave
