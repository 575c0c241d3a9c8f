#include <gtest/gtest.h>

#include <cmath>

#include "lpwave/errors.hpp"
#include "lpwave/parad.hpp"

using namespace lpwave;

namespace {

std::vector<double> sampled(const TorusGrid& g, double (*f)(double)) {
  std::vector<double> s(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) s[p] = f(g.point(p)[0]);
  return s;
}

double max_abs(const SpectralField& u) {
  double m = 0.0;
  for (auto c : u.coefficients()) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

TEST(Cutoff, GammaPairing) {
  const TorusGrid g(1, 256);
  EXPECT_EQ(cutoff_for_gamma(1.0, g).mu(), -2);
  EXPECT_EQ(cutoff_for_gamma(8.0, g).mu(), 1);
  EXPECT_THROW(cutoff_for_gamma(3.0, g), ConfigurationError);
  EXPECT_THROW(make_cutoff(-3, 1.0, g), ConfigurationError);
  EXPECT_THROW(make_cutoff(5, 1.0, g), ConfigurationError);
}

TEST(Cutoff, SupportConstants) {
  const TorusGrid g(1, 512);
  const auto c = cutoff_for_gamma(4.0, g);
  EXPECT_EQ(c.mu(), 0);
  EXPECT_GT(c.eps1(), 0.0);
  EXPECT_LT(c.eps2(), 1.0);
  EXPECT_LT(c.eps1(), c.eps2());
  for (double x : {0.0, 3.0, 40.0, 200.0}) {
    EXPECT_DOUBLE_EQ(c.psi(0.0, x), 1.0);
    EXPECT_DOUBLE_EQ(c.psi(0.99 * c.eps1() * (4.0 + x), x), 1.0);
    EXPECT_DOUBLE_EQ(c.psi(1.01 * c.eps2() * (4.0 + x), x), 0.0);
  }
}

TEST(Paraproduct, MultiplierSymbolIsFourierMultiplier) {
  const TorusGrid g(1, 128);
  const auto c = make_cutoff(0, 2.0, g);
  std::mt19937_64 rng(1);
  const auto u = random_real_field(g, rng, [](double r) { return 1.0 / (1.0 + r); });
  const auto sym = lambda_symbol(2.0, 1.0);
  const auto tu = apply_parad(c, sym, u);
  const auto ref = apply_multiplier(u, [](const Frequency& k, double) {
    return Complex(std::sqrt(4.0 + double(k[0]) * k[0]));
  });
  EXPECT_LT(coefficient_norm(tu - ref), 1e-12 * coefficient_norm(ref));
}

TEST(Paraproduct, LowFrequencyCoefficientActsAsProduct) {
  const TorusGrid g(1, 256);
  const auto c = make_cutoff(0, 1.0, g);
  const auto a = sampled(g, [](double x) { return 2.0 + std::cos(x); });
  const auto u = SpectralField::mode(g, {64, 0});
  const auto tu = apply_parad(c, function_symbol(a), u);
  std::vector<Complex> prod(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) prod[p] = a[p] * u.values()[p];
  const auto ref = SpectralField::from_values(g, prod);
  EXPECT_LT(coefficient_norm(tu - ref), 1e-13);
}

TEST(Paraproduct, HighFrequencyCoefficientIsDiscarded) {
  const TorusGrid g(1, 256);
  const auto c = make_cutoff(0, 1.0, g);
  const auto a = sampled(g, [](double x) { return std::cos(64.0 * x); });
  const auto tu = apply_parad(c, function_symbol(a), SpectralField::mode(g, {1, 0}));
  // the sampled cosine carries rounding-level low modes
  EXPECT_LE(max_abs(tu), 1e-14);
}

TEST(Paraproduct, AdjointIdentity) {
  for (int dim : {1, 2}) {
    const TorusGrid g(dim, dim == 1 ? 128 : 32);
    const auto c = make_cutoff(0, 1.0, g);
    std::mt19937_64 rng(3);
    const auto u = random_real_field(g, rng, [](double r) { return 1.0 / (1.0 + r); });
    const auto v = random_real_field(g, rng, [](double r) { return 1.0 / (1.0 + r); });
    const auto f = random_real_field(g, rng, [](double r) { return std::pow(1.0 + r, -2.0); });
    std::vector<double> fs(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) fs[p] = 1.5 + f.values()[p].real();
    const auto sym = product(function_symbol(fs), lambda_symbol(1.0, 1.0));
    const Complex lhs = parseval_inner(apply_parad(c, sym, u), v);
    const Complex rhs = parseval_inner(u, apply_parad_adjoint(c, sym, v));
    EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::abs(lhs));
  }
}

TEST(Paraproduct, ClassicalSymbolOfMultiplier) {
  const TorusGrid g(1, 64);
  const auto c = make_cutoff(0, 1.0, g);
  const auto sigma = classical_symbol(c, lambda_symbol(1.0, 2.0), {5, 0});
  for (auto s : sigma) EXPECT_NEAR(s.real(), 26.0, 1e-11);
}

TEST(Paraproduct, CompositionOfMultipliersIsExact) {
  const TorusGrid g(1, 1024);
  const CutoffSystem cs;
  const auto c = cutoff_for_gamma(1.0, g);
  std::mt19937_64 rng(4);
  std::vector<int> rings{4, 5, 6};
  std::vector<std::vector<SpectralField>> probes;
  for (int j : rings) probes.push_back({random_ring_field(cs, g, j, rng), random_ring_field(cs, g, j, rng)});
  const auto rep = remainder_probe(c, lambda_symbol(1.0, 1.0), lambda_symbol(1.0, -0.5), rings, probes);
  EXPECT_TRUE(rep.composition_zero);
  for (const auto& r : rep.rings) EXPECT_LT(r.adjoint, 1e-12);
}

TEST(Kernel, BoundsAndMoment) {
  const TorusGrid g(1, 1024);
  std::vector<int> xs;
  for (int j = 2; j <= 8; ++j) xs.push_back(static_cast<int>(1.5 * (1 << j)));
  std::vector<KernelReport> reps;
  for (double gamma : {1.0, 8.0}) {
    reps.push_back(kernel_bounds_probe(cutoff_for_gamma(gamma, g), xs));
    for (const auto& s : reps.back().samples) EXPECT_LE(std::abs(s.moment), 1e-12);
  }
  for (int f = 0; f < 4; ++f) EXPECT_LE(kernel_spread(reps, f, false), 8.0) << "family " << f;
}

TEST(Positivity, LambdaSymbolRatioIsOne) {
  const TorusGrid g(1, 256);
  const CutoffSystem cs;
  const auto c = cutoff_for_gamma(4.0, g);
  std::mt19937_64 rng(6);
  std::vector<SpectralField> probes;
  for (int j = 1; j <= 6; ++j) probes.push_back(random_ring_field(cs, g, j, rng));
  const auto rep = positivity_probe(c, lambda_symbol(4.0, 1.0), probes);
  for (double r : rep.ratios) EXPECT_NEAR(r, 1.0, 1e-12);
  EXPECT_TRUE(rep.positive);
}

TEST(Positivity, AlphaBoundsForConstantCoefficient) {
  const TorusGrid g(1, 64);
  const auto a = constant_coefficients(1, {4.0, 0.0, 0.0});
  const AlphaSymbol alpha(a, 2.0, 0.0, g);
  // alpha = (4 + 4 xi^2)^{1/2} / (4 + xi^2)^{1/2}
  for (int k : {0, 3, 20}) {
    const double ref = std::sqrt(4.0 + 4.0 * k * k) / std::sqrt(4.0 + k * k);
    EXPECT_NEAR(alpha.value(0, {k, 0}), ref, 1e-14);
    EXPECT_EQ(alpha.time_derivative(0, {k, 0}), 0.0);
  }
  EXPECT_LE(alpha.lower_bound(), 1.0);
  EXPECT_GE(alpha.upper_bound(), 2.0);
}

TEST(Positivity, GammaSearchOnRoughCoefficient) {
  const TorusGrid g(1, 512);
  const CutoffSystem cs;
  CoefficientProfile p;
  p.amplitude = 0.25;
  p.time_depth = 12;
  p.space_depth = 7;
  p.seed = 3;
  const auto a = make_coefficients(p);
  std::vector<SpectralField> probes;
  std::mt19937_64 rng(1);
  for (int j = 1; j <= 7; ++j)
    for (int t = 0; t < 3; ++t) probes.push_back(random_ring_field(cs, g, j, rng));
  GammaSearch search;
  search.times = {0.0, 0.5};
  const auto choice = choose_gamma_mu(a, probes, search);
  ASSERT_TRUE(choice.found);
  EXPECT_EQ(choice.mu, static_cast<int>(std::log2(choice.gamma)) - 2);
  EXPECT_GE(choice.margin_l2, search.margin);
  EXPECT_GE(choice.margin_h1, search.margin);

  const auto cut = cutoff_for_gamma(choice.gamma, g);
  double lo = INFINITY, hi = 0.0, threshold = 0.0;
  for (int nu = 0; nu <= 8; ++nu) {
    const AlphaSymbol alpha(smooth_in_time(a, std::ldexp(1.0, -nu)), choice.gamma, 0.3, g);
    const double r = positivity_probe(cut, alpha.power(-0.5), probes).min_ratio;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    threshold = std::max(threshold, 0.5 / std::sqrt(alpha.upper_bound()));
  }
  EXPECT_GE(lo, threshold);
  EXPECT_LE(hi / lo - 1.0, 0.10);
}

TEST(Positivity, ScaledIdentityFailsLiteralThreshold) {
  const TorusGrid g(1, 128);
  const CutoffSystem cs;
  std::mt19937_64 rng(2);
  std::vector<SpectralField> probes;
  for (int j = 1; j <= 5; ++j) probes.push_back(random_ring_field(cs, g, j, rng));
  const auto choice = choose_gamma_mu(constant_coefficients(1, {4.0, 0.0, 0.0}), probes);
  EXPECT_FALSE(choice.found);
  // ||alpha^{-1/2}|| <= 1 < lambda0 / 2 = 2, so the L2 margin cannot reach 1.
  EXPECT_LT(choice.margin_l2, 1.0);
}
