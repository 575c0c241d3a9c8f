#include <gtest/gtest.h>

#include <cmath>

#include "lpwave/errors.hpp"
#include "lpwave/rough.hpp"

using namespace lpwave;

namespace {

// Composite Simpson on [-1, 1] with n (even) panels.
template <class F>
double simpson(F f, int n = 20000) {
  const double h = 2.0 / n;
  double s = f(-1.0) + f(1.0);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(-1.0 + i * h);
  return s * h / 3.0;
}

double bump(double s) {
  const double q = 1.0 - s * s;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

}  // namespace

TEST(Mollifier, NormalizationAndMoments) {
  const auto& k = MollifierKernel::standard();
  EXPECT_NEAR(k.normalization(), 0.443993816168079, 1e-12);
  EXPECT_NEAR(k.moment(0), 1.0, 1e-14);
  EXPECT_EQ(k.moment(1), 0.0);
  const double m2 = simpson([](double s) { return s * s * bump(s); }) / simpson(bump);
  EXPECT_NEAR(k.moment(2), m2, 1e-10);
  EXPECT_THROW(k.moment(9), DomainError);
}

TEST(Mollifier, FourierTransformMatchesQuadrature) {
  const auto& k = MollifierKernel::standard();
  const double z = simpson(bump);
  for (double w : {0.5, 1.0, 7.0, 30.0}) {
    const double ref = simpson([w](double s) { return std::cos(w * s) * bump(s); }) / z;
    EXPECT_NEAR(k.fourier(w), ref, 1e-10) << w;
    EXPECT_EQ(k.fourier(-w), k.fourier(w));
  }
  EXPECT_EQ(k.fourier(0.0), 1.0);
}

TEST(Mollifier, DerivativeMatchesDifference) {
  const auto& k = MollifierKernel::standard();
  const double h = 1e-6;
  for (double s : {-0.7, 0.1, 0.5}) EXPECT_NEAR(k.rho_derivative(s), (k.rho(s + h) - k.rho(s - h)) / (2 * h), 1e-6);
  EXPECT_EQ(k.rho(1.0), 0.0);
}

TEST(Coefficients, ConstantField) {
  const auto a = constant_coefficients(2, {2.0, 0.5, 3.0});
  EXPECT_TRUE(a.is_constant_in_time());
  EXPECT_TRUE(a.is_constant_in_space());
  EXPECT_DOUBLE_EQ(a.value(0, 1, 0.3, {1.0, 2.0}), 0.5);
  EXPECT_DOUBLE_EQ(a.value(1, 0, 0.3, {1.0, 2.0}), 0.5);
  // eigenvalues of [[2, .5], [.5, 3]]
  const double lo = 2.5 - std::sqrt(0.5), hi = 2.5 + std::sqrt(0.5);
  EXPECT_NEAR(a.lambda0(), lo, 1e-12);
  EXPECT_NEAR(a.Lambda0(), hi, 1e-12);
  EXPECT_NEAR(a.quadratic_form(0.0, {0, 0}, {1.0, 2.0}), 2.0 + 2 * 0.5 * 2.0 + 3.0 * 4.0, 1e-13);
}

TEST(Coefficients, SweepInsideCertifiedBounds) {
  for (auto tk : {TimeRegularity::log_zygmund, TimeRegularity::lipschitz}) {
    for (int dim : {1, 2}) {
      CoefficientProfile p;
      p.dim = dim;
      p.amplitude = 0.25;
      p.time_kind = tk;
      p.time_depth = 8;
      p.space_depth = 5;
      p.seed = 7;
      const auto a = make_coefficients(p);
      EXPECT_LE(a.lambda0_bound(), a.lambda0() + 1e-12);
      EXPECT_GE(a.Lambda0_bound(), a.Lambda0() - 1e-12);
      EXPECT_GT(a.lambda0(), 0.0);
      EXPECT_EQ(a.max_time_frequency(), 256.0);
      EXPECT_EQ(a.max_space_frequency(), 32);
    }
  }
}

TEST(Coefficients, EllipticityFailure) {
  CoefficientProfile p;
  p.base = {0.3, 0.0, 0.3};
  p.amplitude = 1.0;
  p.time_depth = 6;
  p.space_depth = 4;
  EXPECT_THROW(make_coefficients(p), EllipticityError);
  p.base = {-1.0, 0.0, 1.0};
  EXPECT_THROW(make_coefficients(p), ConfigurationError);
}

TEST(Coefficients, SeedDeterminism) {
  CoefficientProfile p;
  p.amplitude = 0.2;
  p.time_depth = 6;
  const auto a = make_coefficients(p), b = make_coefficients(p);
  for (double t : {0.0, 0.7, 2.5}) EXPECT_EQ(a.value(0, 0, t, {1.1, 0}), b.value(0, 0, t, {1.1, 0}));
  p.seed = 2;
  const auto c = make_coefficients(p);
  EXPECT_NE(a.value(0, 0, 0.7, {1.1, 0}), c.value(0, 0, 0.7, {1.1, 0}));
}

TEST(Coefficients, TimeDerivativeMatchesDifference) {
  CoefficientProfile p;
  p.amplitude = 0.2;
  p.time_depth = 5;
  p.mixed_amplitude = 0.1;
  const auto a = make_coefficients(p);
  const double h = 1e-5, t = 0.9;
  const std::array<double, 2> x{0.4, 0.0};
  EXPECT_NEAR(a.value(0, 0, t, x, 1), (a.value(0, 0, t + h, x) - a.value(0, 0, t - h, x)) / (2 * h), 1e-5);
}

TEST(Smoothing, SingleTermClosedForm) {
  EntrySeries e;
  e.base = 2.0;
  e.terms.push_back({0.3, 12.0, {0, 0}, 0.4});
  const CoefficientField a(1, {e}, -1.0, 4.0);
  const double eps = 0.1;
  const auto ae = smooth_in_time(a, eps);
  const double z = simpson(bump);
  for (double t : {0.0, 0.55, 1.7}) {
    // (rho_eps * a)(t) = int rho(s) a(t - eps s) ds, integrated directly.
    const double ref = simpson([&](double s) { return bump(s) * a.value(0, 0, t - eps * s, {0, 0}); }) / z;
    EXPECT_NEAR(ae.value(0, 0, t, {0, 0}), ref, 1e-10);
  }
  EXPECT_DOUBLE_EQ(ae.t_begin(), -1.0 + eps);
  EXPECT_THROW(smooth_in_time(ae, eps), DomainError);
  EXPECT_THROW(smooth_in_time(a, 0.0), DomainError);
}

TEST(Smoothing, PolynomialTermsPreserveLowMoments) {
  EntrySeries e;
  e.base = 1.0;
  e.poly.push_back({0.5, 1});
  e.poly.push_back({0.25, 2});
  const CoefficientField a(1, {e}, -2.0, 2.0);
  const double eps = 0.2;
  const auto ae = smooth_in_time(a, eps);
  const double m2 = MollifierKernel::standard().moment(2);
  // rho is even: linear terms are reproduced, t^2 gains eps^2 m2.
  EXPECT_NEAR(ae.value(0, 0, 0.3, {0, 0}), 1.0 + 0.5 * 0.3 + 0.25 * (0.09 + eps * eps * m2), 1e-12);
}

TEST(Smoothing, MollifierBoundsFlatForLogZygmund) {
  CoefficientProfile p;
  p.amplitude = 0.25;
  p.time_depth = 16;
  p.space_kind = SpaceRegularity::none;
  p.space_depth = 0;
  const auto a = make_coefficients(p);
  std::vector<double> eps;
  for (int j = 3; j <= 12; ++j) eps.push_back(std::ldexp(1.0, -j));
  const auto fits = mollifier_bound_fit(a, {1.0, 8.0}, eps);
  ASSERT_EQ(fits.size(), 2u);
  for (const auto& f : fits) {
    EXPECT_NEAR(f.slope_difference, 0.0, 0.15);
    EXPECT_NEAR(f.slope_first, 0.0, 0.15);
    EXPECT_NEAR(f.slope_second, 0.0, 0.15);
    EXPECT_TRUE(f.passed);
  }
}
