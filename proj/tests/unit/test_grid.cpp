#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lpwave/errors.hpp"
#include "lpwave/grid.hpp"

using namespace lpwave;

namespace {

constexpr double kPi = std::numbers::pi;

// Direct O(M^2) evaluation of c(k) = M^-N sum_x u(x) e^{-ikx}.
Complex naive_coefficient(const TorusGrid& g, std::span<const Complex> values, Frequency k) {
  Complex sum = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto x = g.point(p);
    sum += values[p] * std::polar(1.0, -(k[0] * x[0] + k[1] * x[1]));
  }
  return sum / static_cast<double>(g.size());
}

std::vector<Complex> random_values(const TorusGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  std::vector<Complex> v(g.size());
  for (auto& c : v) c = {n(rng), n(rng)};
  return v;
}

}  // namespace

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(TorusGrid(3, 16), ConfigurationError);
  EXPECT_THROW(TorusGrid(1, 24), ConfigurationError);
  EXPECT_THROW(TorusGrid(1, 8), ConfigurationError);
}

TEST(Grid, FrequencyLayoutRoundTrips) {
  const TorusGrid g(2, 16);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto k = g.frequency(p);
    EXPECT_GE(k[0], -8);
    EXPECT_LT(k[0], 8);
    EXPECT_EQ(g.index_of(k).value(), p);
  }
  EXPECT_FALSE(g.index_of({8, 0}).has_value());
  EXPECT_DOUBLE_EQ(g.volume(), 4 * kPi * kPi);
}

TEST(Grid, ForwardMatchesDirectSum1D) {
  const TorusGrid g(1, 32);
  const auto v = random_values(g, 1);
  std::vector<Complex> c(g.size());
  g.forward(v, c);
  for (std::size_t p = 0; p < g.size(); ++p)
    EXPECT_LT(std::abs(c[p] - naive_coefficient(g, v, g.frequency(p))), 1e-13);
}

TEST(Grid, ForwardMatchesDirectSum2D) {
  const TorusGrid g(2, 16);
  const auto v = random_values(g, 2);
  std::vector<Complex> c(g.size());
  g.forward(v, c);
  for (std::size_t p = 0; p < g.size(); ++p)
    EXPECT_LT(std::abs(c[p] - naive_coefficient(g, v, g.frequency(p))), 1e-13);
}

TEST(Grid, InverseUndoesForward) {
  const TorusGrid g(2, 32);
  const auto v = random_values(g, 3);
  std::vector<Complex> c(g.size()), back(g.size());
  g.forward(v, c);
  g.inverse(c, back);
  for (std::size_t p = 0; p < g.size(); ++p) EXPECT_LT(std::abs(back[p] - v[p]), 1e-13);
}

TEST(Grid, ModeSamplesExponential) {
  const TorusGrid g(1, 64);
  const auto u = SpectralField::mode(g, {5, 0}, Complex(2.0, -1.0));
  const auto vals = u.values();
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Complex expected = Complex(2.0, -1.0) * std::polar(1.0, 5.0 * g.point(p)[0]);
    EXPECT_LT(std::abs(vals[p] - expected), 1e-13);
  }
  EXPECT_THROW(SpectralField::mode(g, {40, 0}), DomainError);
}

TEST(Grid, ParsevalAgreesWithQuadrature) {
  const TorusGrid g(2, 32);
  std::mt19937_64 rng(4);
  const auto u = random_real_field(g, rng, [](double r) { return 1.0 / (1.0 + r * r); });
  const auto v = random_real_field(g, rng, [](double r) { return 1.0 / (1.0 + r); });
  const Complex a = l2_inner(u, v), b = parseval_inner(u, v);
  EXPECT_LT(std::abs(a - b), 1e-12 * std::abs(a) + 1e-14);
  EXPECT_NEAR(l2_norm(u), std::sqrt(g.volume()) * coefficient_norm(u), 1e-12 * l2_norm(u));
}

TEST(Grid, SingleModeNorms) {
  const TorusGrid g(1, 32);
  const auto u = SpectralField::mode(g, {3, 0}, 3.0);
  EXPECT_NEAR(coefficient_norm(u), 3.0, 1e-15);
  EXPECT_NEAR(l2_norm(u), 3.0 * std::sqrt(2 * kPi), 1e-13);
}

TEST(Grid, DerivativeOfModeAndNyquist) {
  const TorusGrid g(1, 32);
  const auto d = derivative(SpectralField::mode(g, {7, 0}), 0);
  EXPECT_LT(std::abs(d.coefficient({7, 0}) - Complex(0.0, 7.0)), 1e-13);
  const auto dn = derivative(SpectralField::mode(g, {-16, 0}), 0);
  EXPECT_EQ(coefficient_norm(dn), 0.0);
  EXPECT_THROW(derivative(SpectralField::mode(g, {1, 0}), 1), DimensionError);
}

TEST(Grid, DerivativeMatchesAnalyticSine) {
  const TorusGrid g(1, 64);
  std::vector<double> s(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) s[p] = std::sin(3.0 * g.point(p)[0]);
  const auto d = derivative(SpectralField::from_real_values(g, s), 0);
  for (std::size_t p = 0; p < g.size(); ++p)
    EXPECT_NEAR(d.values()[p].real(), 3.0 * std::cos(3.0 * g.point(p)[0]), 1e-12);
}

TEST(Grid, RandomRealFieldIsHermitian) {
  const TorusGrid g(2, 32);
  std::mt19937_64 rng(9);
  const auto u = random_real_field(g, rng, [](double r) { return std::exp(-r / 4); });
  EXPECT_EQ(u.hermitian_defect(), 0.0);
  for (auto v : u.values()) EXPECT_LT(std::abs(v.imag()), 1e-14);
}

TEST(Grid, ArithmeticAndGridMismatch) {
  const TorusGrid g(1, 16), h(1, 32);
  const auto a = SpectralField::mode(g, {1, 0}), b = SpectralField::mode(g, {2, 0});
  const auto c = (a + b.scaled(2.0)) - a;
  EXPECT_LT(std::abs(c.coefficient({2, 0}) - 2.0), 1e-15);
  EXPECT_LT(std::abs(c.coefficient({1, 0})), 1e-15);
  EXPECT_THROW(a + SpectralField::mode(h, {1, 0}), DimensionError);
}

TEST(Grid, RadialMultiplier) {
  const TorusGrid g(2, 16);
  const auto u = SpectralField::mode(g, {3, 4}) + SpectralField::mode(g, {1, 0});
  const auto m = apply_radial(u, [](double r) { return r; });
  EXPECT_NEAR(std::abs(m.coefficient({3, 4})), 5.0, 1e-13);
  EXPECT_NEAR(std::abs(m.coefficient({1, 0})), 1.0, 1e-13);
}
