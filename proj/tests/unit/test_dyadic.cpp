#include <gtest/gtest.h>

#include <cmath>

#include "lpwave/dyadic.hpp"
#include "lpwave/errors.hpp"

using namespace lpwave;

TEST(Cutoff, ProfileShape) {
  const CutoffSystem cs;
  EXPECT_EQ(cs.chi(0.0), 1.0);
  EXPECT_EQ(cs.chi(1.0), 1.0);
  EXPECT_EQ(cs.chi(2.0), 0.0);
  EXPECT_EQ(cs.chi(3.5), 0.0);
  double prev = 1.0;
  for (int i = 0; i <= 20000; ++i) {
    const double c = cs.chi(1.0 + i / 20000.0);
    EXPECT_LE(c, prev + 1e-15);
    EXPECT_GE(c, 0.0);
    prev = c;
  }
  EXPECT_THROW(CutoffSystem(2.5), ConfigurationError);
}

TEST(Cutoff, PhiSupportAndPeak) {
  const CutoffSystem cs;
  EXPECT_EQ(cs.phi(0.4), 0.0);
  EXPECT_EQ(cs.phi(2.0), 0.0);
  EXPECT_EQ(cs.phi(1.0), 1.0);
  for (double r = 0.0; r < 5.0; r += 0.013) EXPECT_NEAR(cs.phi(r), cs.chi(r) - cs.chi(2 * r), 1e-15);
}

TEST(Cutoff, BlockMultipliersTelescope) {
  const CutoffSystem cs;
  for (double r = 0.0; r < 600.0; r += 0.37) {
    double sum = 0.0;
    for (int j = 0; j <= 12; ++j) sum += cs.block_multiplier(j, r);
    EXPECT_NEAR(sum, 1.0, 1e-14);
    double low = 0.0;
    for (int j = 0; j <= 5; ++j) low += cs.block_multiplier(j, r);
    EXPECT_NEAR(low, cs.low_pass_multiplier(5, r), 1e-14);
  }
}

TEST(Cutoff, GammaBlocksTelescope) {
  const CutoffSystem cs;
  const GammaScale scale{4.0};
  EXPECT_NEAR(scale.lambda(3.0), 5.0, 1e-15);
  const TorusGrid g(1, 256);
  std::mt19937_64 rng(2);
  const auto u = random_real_field(g, rng, [](double r) { return 1.0 / (1.0 + r); });
  auto sum = gamma_low_pass(cs, u, 0, scale);
  for (int nu = 0; nu <= 8; ++nu) sum = sum + gamma_block(cs, u, nu, scale);
  EXPECT_LT(coefficient_norm(sum - u), 1e-13 * coefficient_norm(u));
}

TEST(Blocks, DyadicModeSitsInOneBlock) {
  const CutoffSystem cs;
  const TorusGrid g(1, 512);
  for (int nu = 0; nu <= 7; ++nu) {
    const auto u = SpectralField::mode(g, {1 << nu, 0});
    for (int j = 0; j <= 9; ++j) {
      const double n = coefficient_norm(block(cs, u, j));
      EXPECT_NEAR(n, j == nu ? 1.0 : 0.0, 1e-15) << "nu " << nu << " j " << j;
    }
  }
}

TEST(Blocks, PartitionOfUnityOnRandomFields) {
  const CutoffSystem cs;
  for (int dim : {1, 2}) {
    const TorusGrid g(dim, dim == 1 ? 1024 : 64);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10; ++i) {
      const double p = 0.3 * i;
      const auto u = random_real_field(g, rng, [p](double r) { return std::pow(1.0 + r, -p); });
      EXPECT_LE(partition_defect(cs, u), 1e-12);
    }
  }
}

TEST(Blocks, TopIndexCoversLattice) {
  EXPECT_EQ(top_block_index(TorusGrid(1, 1024)), 9);
  const TorusGrid g2(2, 64);
  const int top = top_block_index(g2);
  const CutoffSystem cs;
  for (std::size_t p = 0; p < g2.size(); ++p)
    EXPECT_EQ(cs.low_pass_multiplier(top, g2.frequency_norm(p)), 1.0);
}

TEST(Blocks, RingFieldSupport) {
  const CutoffSystem cs;
  const TorusGrid g(1, 512);
  std::mt19937_64 rng(5);
  for (int j = 1; j <= 7; ++j) {
    const auto u = random_ring_field(cs, g, j, rng);
    EXPECT_GT(coefficient_norm(u), 0.0);
    const auto c = u.coefficients();
    for (std::size_t p = 0; p < g.size(); ++p) {
      const double r = g.frequency_norm(p);
      if (r <= std::ldexp(1.0, j - 1) || r >= std::ldexp(1.0, j + 1)) EXPECT_EQ(c[p], Complex(0.0));
    }
  }
}

TEST(Blocks, PartialDerivativeOfMode) {
  const TorusGrid g(2, 32);
  const auto u = SpectralField::mode(g, {3, -2});
  const auto d = partial_derivative(u, {1, 2});
  // (i 3)(i -2)^2 = -12 i
  EXPECT_LT(std::abs(d.coefficient({3, -2}) - Complex(0.0, -12.0)), 1e-12);
  EXPECT_THROW(partial_derivative(SpectralField::mode(TorusGrid(1, 16), {1, 0}), {0, 1}), DimensionError);
}

TEST(Bernstein, SlopesMatchDerivativeOrder) {
  const CutoffSystem cs;
  const TorusGrid g(1, 1024);
  for (int order = 0; order <= 2; ++order) {
    const auto rep = bernstein_probe(cs, g, {3, 4, 5, 6, 7, 8}, {order, 0}, 20, 1);
    EXPECT_NEAR(rep.slope, order, 0.05);
    EXPECT_LE(rep.spread, 4.0);
    EXPECT_GT(rep.c_lower, 0.0);
    EXPECT_EQ(rep.profile_hash, cs.profile_hash());
  }
}

TEST(Bernstein, TwoDimensionalMixedDerivative) {
  const CutoffSystem cs;
  const TorusGrid g(2, 128);
  const auto rep = bernstein_probe(cs, g, {2, 3, 4, 5}, {1, 1}, 10, 4);
  EXPECT_NEAR(rep.slope, 2.0, 0.1);
}

TEST(Bernstein, RejectsBadArguments) {
  const CutoffSystem cs;
  const TorusGrid g(1, 64);
  EXPECT_THROW(bernstein_probe(cs, g, {3, 4}, {1, 0}, 5, 1), DomainError);
  EXPECT_THROW(bernstein_probe(cs, g, {3}, {1, 0}, 20, 1), DomainError);
  EXPECT_THROW(bernstein_probe(cs, g, {3, 6}, {1, 0}, 20, 1), ConfigurationError);
}
