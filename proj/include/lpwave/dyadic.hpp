#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "lpwave/grid.hpp"

namespace lpwave {

/// Radial cutoff pair: chi is 1 on [0, r1], 0 on [2, inf) and a smooth
/// nonincreasing step in between; phi(r) = chi(r) - chi(2r).
class CutoffSystem {
 public:
  explicit CutoffSystem(double inner_radius = 1.0);

  double inner_radius() const noexcept { return r1_; }
  double chi(double r) const;
  double phi(double r) const;
  /// chi'(r), used for symbol derivatives.
  double chi_derivative(double r) const;

  /// Multiplier of Delta_j at |xi| = r: chi(r) for j = 0, phi(2^-j r) for j >= 1, 0 below.
  double block_multiplier(int j, double r) const;
  /// Multiplier of S_j: chi(2^-j r).
  double low_pass_multiplier(int j, double r) const;
  /// chi(2^-nu lambda) with lambda = Lambda(xi, gamma).
  double gamma_low_pass_multiplier(int nu, double lambda) const;
  /// chi(2^-nu-1 lambda) - chi(2^-nu lambda).
  double gamma_block_multiplier(int nu, double lambda) const;

  /// FNV-1a hash of chi sampled on a fixed radial grid; identifies the profile in reports.
  std::uint64_t profile_hash() const;

 private:
  struct Table;
  double r1_;
  std::shared_ptr<const Table> table_;
};

/// Lambda(xi, gamma) = (gamma^2 + |xi|^2)^{1/2}.
struct GammaScale {
  double gamma = 1.0;
  double lambda(double xi_norm) const;
};

SpectralField block(const CutoffSystem& cs, const SpectralField& u, int j);
SpectralField low_pass(const CutoffSystem& cs, const SpectralField& u, int j);
SpectralField gamma_block(const CutoffSystem& cs, const SpectralField& u, int nu,
                          const GammaScale& scale);
SpectralField gamma_low_pass(const CutoffSystem& cs, const SpectralField& u, int nu,
                             const GammaScale& scale);

/// Smallest J with chi(2^-J |xi|) = 1 on every lattice point of the grid.
int top_block_index(const TorusGrid& grid);

/// u - sum_{j <= top} Delta_j u, as an L2 norm relative to u.
double partition_defect(const CutoffSystem& cs, const SpectralField& u);

/// Random real field supported in ring j: Delta_j applied to white noise.
SpectralField random_ring_field(const CutoffSystem& cs, const TorusGrid& grid, int j,
                                std::mt19937_64& rng);

/// Multiplier (i xi)^alpha.
SpectralField partial_derivative(const SpectralField& u, std::array<int, 2> alpha);

struct BernsteinRing {
  int j = 0;
  /// Geometric mean over trials of ||d^alpha u|| / ||u||.
  double mean_ratio = 0.0;
  /// Extremes of ||d^alpha u|| / (2^{j|alpha|} ||u||) over trials.
  double c_min = 0.0;
  double c_max = 0.0;
};

struct BernsteinReport {
  std::array<int, 2> alpha{};
  int order = 0;
  std::vector<BernsteinRing> rings;
  /// Regression slope of log mean_ratio against log 2^j.
  double slope = 0.0;
  double c_lower = 0.0;
  double c_upper = 0.0;
  /// c_upper / c_lower over all rings and trials.
  double spread = 0.0;
  std::uint64_t profile_hash = 0;
};

BernsteinReport bernstein_probe(const CutoffSystem& cs, const TorusGrid& grid,
                                const std::vector<int>& rings, std::array<int, 2> alpha,
                                int trials, std::uint64_t seed);

}  // namespace lpwave
