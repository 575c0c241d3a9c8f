#include "lpwave/dyadic.hpp"

#include <boost/math/interpolators/quintic_hermite.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <cstring>

#include "lpwave/errors.hpp"
#include "lpwave/stats.hpp"

namespace lpwave {

namespace {

double bump(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return std::exp(-1.0 / (s * (1.0 - s)));
}

double bump_derivative(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double q = s * (1.0 - s);
  return bump(s) * (1.0 - 2.0 * s) / (q * q);
}

constexpr int kCells = 2048;

}  // namespace

// Normalized primitive H(s) = int_0^s bump / int_0^1 bump, tabulated with its
// first two derivatives and interpolated by quintic Hermite splines.
struct CutoffSystem::Table {
  Table() {
    using boost::math::quadrature::gauss;
    const double h = 1.0 / kCells;
    std::vector<double> y(kCells + 1), dy(kCells + 1), d2y(kCells + 1);
    for (int i = 0; i < kCells; ++i) {
      const double a = i * h;
      y[i + 1] = y[i] + gauss<double, 15>::integrate(bump, a, a + h);
    }
    const double z = y[kCells];
    for (int i = 0; i <= kCells; ++i) {
      y[i] /= z;
      dy[i] = bump(i * h) / z;
      d2y[i] = bump_derivative(i * h) / z;
    }
    y[kCells] = 1.0;
    spline.emplace(std::move(y), std::move(dy), std::move(d2y), 0.0, h);
    norm = z;
  }

  double primitive(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return (*spline)(s);
  }

  std::optional<boost::math::interpolators::cardinal_quintic_hermite<std::vector<double>>> spline;
  double norm = 1.0;
};

CutoffSystem::CutoffSystem(double inner_radius) : r1_(inner_radius) {
  if (!(inner_radius >= 1.0 && inner_radius < 2.0))
    throw ConfigurationError("cutoff inner radius must lie in [1, 2)");
  static const auto shared = std::make_shared<const Table>();
  table_ = shared;
}

double CutoffSystem::chi(double r) const {
  if (r <= r1_) return 1.0;
  if (r >= 2.0) return 0.0;
  const double s = (r - r1_) / (2.0 - r1_);
  // The bump is symmetric, so 1 - H(s) = H(1 - s); evaluate the small side directly.
  return s < 0.5 ? 1.0 - table_->primitive(s) : table_->primitive(1.0 - s);
}

double CutoffSystem::chi_derivative(double r) const {
  if (r <= r1_ || r >= 2.0) return 0.0;
  const double w = 2.0 - r1_;
  return -bump((r - r1_) / w) / (table_->norm * w);
}

double CutoffSystem::phi(double r) const { return chi(r) - chi(2.0 * r); }

double CutoffSystem::block_multiplier(int j, double r) const {
  if (j < 0) return 0.0;
  if (j == 0) return chi(r);
  return phi(std::ldexp(r, -j));
}

double CutoffSystem::low_pass_multiplier(int j, double r) const { return chi(std::ldexp(r, -j)); }

double CutoffSystem::gamma_low_pass_multiplier(int nu, double lambda) const {
  return chi(std::ldexp(lambda, -nu));
}

double CutoffSystem::gamma_block_multiplier(int nu, double lambda) const {
  return chi(std::ldexp(lambda, -nu - 1)) - chi(std::ldexp(lambda, -nu));
}

std::uint64_t CutoffSystem::profile_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (int i = 0; i <= 1024; ++i) {
    const double v = chi(2.5 * i / 1024.0);
    unsigned char bytes[sizeof v];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  }
  return h;
}

double GammaScale::lambda(double xi_norm) const { return std::hypot(gamma, xi_norm); }

SpectralField block(const CutoffSystem& cs, const SpectralField& u, int j) {
  if (j < 0) return SpectralField::zero(u.grid());
  return apply_radial(u, [&](double r) { return cs.block_multiplier(j, r); });
}

SpectralField low_pass(const CutoffSystem& cs, const SpectralField& u, int j) {
  return apply_radial(u, [&](double r) { return cs.low_pass_multiplier(j, r); });
}

SpectralField gamma_block(const CutoffSystem& cs, const SpectralField& u, int nu,
                          const GammaScale& scale) {
  return apply_radial(u, [&](double r) { return cs.gamma_block_multiplier(nu, scale.lambda(r)); });
}

SpectralField gamma_low_pass(const CutoffSystem& cs, const SpectralField& u, int nu,
                             const GammaScale& scale) {
  return apply_radial(u,
                      [&](double r) { return cs.gamma_low_pass_multiplier(nu, scale.lambda(r)); });
}

int top_block_index(const TorusGrid& grid) {
  const double rmax = grid.nyquist() * std::sqrt(static_cast<double>(grid.dim()));
  int j = 0;
  while (std::ldexp(1.0, j) < rmax) ++j;
  return j;
}

double partition_defect(const CutoffSystem& cs, const SpectralField& u) {
  const auto& g = u.grid();
  std::vector<Complex> sum(g.size());
  for (int j = 0; j <= top_block_index(g); ++j) {
    const auto bj = block(cs, u, j);
    const auto b = bj.coefficients();
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += b[i];
  }
  const auto c = u.coefficients();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < sum.size(); ++i) {
    num += std::norm(c[i] - sum[i]);
    den += std::norm(c[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

SpectralField random_ring_field(const CutoffSystem& cs, const TorusGrid& grid, int j,
                                std::mt19937_64& rng) {
  const auto noise = random_real_field(grid, rng, [](double) { return 1.0; });
  return block(cs, noise, j);
}

SpectralField partial_derivative(const SpectralField& u, std::array<int, 2> alpha) {
  const auto& g = u.grid();
  if (g.dim() == 1 && alpha[1] != 0) throw DimensionError("derivative along a missing axis");
  const Complex i1(0.0, 1.0);
  auto out = apply_multiplier(u, [&](const Frequency& k, double) {
    Complex m = 1.0;
    for (int a = 0; a < 2; ++a) {
      if (alpha[a] == 0) continue;
      if (k[a] == -g.nyquist()) return Complex(0.0);
      m *= std::pow(i1 * static_cast<double>(k[a]), alpha[a]);
    }
    return m;
  });
  return u.parity() == Parity::real
             ? SpectralField::from_coefficients(
                   g, {out.coefficients().begin(), out.coefficients().end()}, Parity::real)
             : out;
}

BernsteinReport bernstein_probe(const CutoffSystem& cs, const TorusGrid& grid,
                                const std::vector<int>& rings, std::array<int, 2> alpha,
                                int trials, std::uint64_t seed) {
  if (trials < 10) throw DomainError("bernstein probe needs at least 10 trials");
  if (rings.size() < 2) throw DomainError("bernstein probe needs at least two rings");
  BernsteinReport rep;
  rep.alpha = alpha;
  rep.order = alpha[0] + alpha[1];
  rep.profile_hash = cs.profile_hash();
  std::mt19937_64 rng(seed);
  Bracket all;
  std::vector<double> lam, mean;
  for (int j : rings) {
    if (std::ldexp(1.0, j + 1) > grid.nyquist())
      throw ConfigurationError("ring " + std::to_string(j) + " exceeds the grid's Nyquist ring");
    BernsteinRing ring{j, 0.0, 0.0, 0.0};
    Bracket br;
    double log_sum = 0.0;
    for (int t = 0; t < trials; ++t) {
      SpectralField u = random_ring_field(cs, grid, j, rng);
      for (int attempt = 0; coefficient_norm(u) == 0.0 && attempt < 16; ++attempt)
        u = random_ring_field(cs, grid, j, rng);
      const double nu = coefficient_norm(u);
      if (nu == 0.0) throw DomainError("ring field degenerate after resampling");
      const double ratio = coefficient_norm(partial_derivative(u, alpha)) / nu;
      log_sum += std::log(ratio);
      br.add(ratio / std::ldexp(1.0, j * rep.order));
    }
    ring.mean_ratio = std::exp(log_sum / trials);
    ring.c_min = br.lo;
    ring.c_max = br.hi;
    all.add(br.lo);
    all.add(br.hi);
    rep.rings.push_back(ring);
    lam.push_back(std::ldexp(1.0, j));
    mean.push_back(ring.mean_ratio);
  }
  rep.slope = log_log_slope(lam, mean);
  rep.c_lower = all.lo;
  rep.c_upper = all.hi;
  rep.spread = all.width();
  return rep;
}

}  // namespace lpwave
