#include "lpwave/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lpwave/errors.hpp"
#include "lpwave/stats.hpp"

namespace lpwave {

void validate(const NormSpec& spec) {
  if (!(spec.gamma == 0.0 || spec.gamma >= 1.0))
    throw DomainError("norm parameter gamma must be >= 1 (or 0 for the classical weight)");
  if (!(std::abs(spec.s) <= 10.0)) throw DomainError("Sobolev index outside [-10, 10]");
  if (!std::isfinite(spec.alpha)) throw DomainError("logarithmic index must be finite");
}

double sobolev_weight(const NormSpec& spec, double r) {
  double lambda, lg;
  if (spec.gamma == 0.0) {
    lambda = std::sqrt(1.0 + r * r);
    lg = std::log(2.0 + r);
  } else {
    lambda = std::hypot(spec.gamma, r);
    lg = std::log(1.0 + spec.gamma + r);
  }
  double w = spec.s == 0.0 ? 1.0 : std::pow(lambda, spec.s);
  if (spec.alpha != 0.0) w *= std::pow(lg, spec.alpha);
  return w;
}

double sobolev_norm(const SpectralField& u, const NormSpec& spec) {
  validate(spec);
  const auto& g = u.grid();
  const auto c = u.coefficients();
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    const double w = sobolev_weight(spec, g.frequency_norm(i));
    sum += w * w * std::norm(c[i]);
  }
  return std::sqrt(sum);
}

double dyadic_norm(const CutoffSystem& cs, const SpectralField& u, const NormSpec& spec) {
  validate(spec);
  double sum = 0.0;
  for (int k = 0; k <= top_block_index(u.grid()); ++k) {
    const double b = coefficient_norm(block(cs, u, k));
    const double d = std::pow(2.0, k * spec.s) * std::pow(1.0 + k, spec.alpha) * b;
    sum += d * d;
  }
  return std::sqrt(sum);
}

namespace {

std::vector<std::size_t> offset_ladder(double h, std::size_t n, bool periodic) {
  // offsets m with 0 < m h < 1 that still leave pairs inside the sample range
  std::size_t mmax = static_cast<std::size_t>(std::ceil(1.0 / h)) ;
  while (mmax > 0 && static_cast<double>(mmax) * h >= 1.0) --mmax;
  if (!periodic) mmax = std::min(mmax, n > 0 ? n - 1 : 0);
  else mmax = std::min(mmax, n / 2);
  std::vector<std::size_t> out;
  for (std::size_t m = 1; m <= std::min<std::size_t>(64, mmax); ++m) out.push_back(m);
  double m = 64.0;
  while (true) {
    m *= 1.04;
    const auto mi = static_cast<std::size_t>(std::ceil(m));
    if (mi > mmax) break;
    if (mi != out.back()) out.push_back(mi);
  }
  if (!out.empty() && out.back() != mmax) out.push_back(mmax);
  return out;
}

ModulusReport modulus(const Samples& f, ModulusKind kind) {
  if (!(f.spacing > 0.0)) throw DomainError("sample spacing must be positive");
  const auto& v = f.values;
  const std::size_t n = v.size();
  ModulusReport rep;
  rep.kind = kind;
  rep.spacing = f.spacing;
  for (double x : v) rep.sup_norm = std::max(rep.sup_norm, std::abs(x));
  const auto ladder = offset_ladder(f.spacing, n, f.periodic);
  rep.offsets_tested = ladder.size();
  for (std::size_t m : ladder) {
    const double y = static_cast<double>(m) * f.spacing;
    rep.max_offset = std::max(rep.max_offset, y);
    const double denom = y * std::log(1.0 + 1.0 / y);
    double best = 0.0;
    if (kind == ModulusKind::ll) {
      if (f.periodic) {
        for (std::size_t i = 0; i < n; ++i) best = std::max(best, std::abs(v[(i + m) % n] - v[i]));
      } else {
        for (std::size_t i = 0; i + m < n; ++i) best = std::max(best, std::abs(v[i + m] - v[i]));
      }
    } else {
      if (f.periodic) {
        for (std::size_t i = 0; i < n; ++i)
          best = std::max(best, std::abs(v[(i + m) % n] + v[(i + n - m % n) % n] - 2.0 * v[i]));
      } else {
        for (std::size_t i = m; i + m < n; ++i)
          best = std::max(best, std::abs(v[i + m] + v[i - m] - 2.0 * v[i]));
      }
    }
    const double q = best / denom;
    if (q > rep.seminorm) {
      rep.seminorm = q;
      rep.argmax_offset = y;
    }
  }
  return rep;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

SpectralField periodic_field(const Samples& g) {
  if (!g.periodic || !is_power_of_two(g.values.size()))
    throw DomainError("dyadic analysis needs periodic samples of power-of-two length");
  const TorusGrid grid(1, static_cast<int>(g.values.size()));
  return SpectralField::from_real_values(grid, g.values);
}

double sup_norm(const SpectralField& u) {
  double s = 0.0;
  for (const auto& v : u.values()) s = std::max(s, std::abs(v));
  return s;
}

LacunarySeries make_series(int depth, std::uint64_t seed, double scale,
                           double (*amp)(int k)) {
  if (depth < 0) throw DomainError("series depth must be nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  LacunarySeries s;
  for (int k = 1; k <= depth; ++k) {
    s.amplitude.push_back(scale * amp(k));
    s.frequency.push_back(std::ldexp(1.0, k));
    s.phase.push_back(phase(rng));
  }
  return s;
}

}  // namespace

ModulusReport ll_seminorm(const Samples& f) { return modulus(f, ModulusKind::ll); }
ModulusReport lz_seminorm(const Samples& g) { return modulus(g, ModulusKind::lz); }

double lz_dyadic_indicator(const CutoffSystem& cs, const Samples& g) {
  const auto u = periodic_field(g);
  double best = 0.0;
  for (int nu = 0; nu <= top_block_index(u.grid()); ++nu)
    best = std::max(best, std::ldexp(1.0, nu) / (nu + 1.0) * sup_norm(block(cs, u, nu)));
  return best;
}

double LacunarySeries::operator()(double x) const {
  double s = 0.0;
  for (std::size_t k = 0; k < amplitude.size(); ++k)
    s += amplitude[k] * std::cos(frequency[k] * x + phase[k]);
  return s;
}

double LacunarySeries::derivative(double x, int order) const {
  double s = 0.0;
  for (std::size_t k = 0; k < amplitude.size(); ++k) {
    const double w = frequency[k];
    const double arg = w * x + phase[k];
    // d^n/dx^n cos(arg) = w^n cos(arg + n pi/2)
    s += amplitude[k] * std::pow(w, order) * std::cos(arg + order * std::numbers::pi / 2);
  }
  return s;
}

LacunarySeries ll_series(int depth, std::uint64_t seed, double scale) {
  return make_series(depth, seed, scale, [](int k) { return std::ldexp(1.0, -k); });
}

LacunarySeries lz_series(int depth, std::uint64_t seed, double scale) {
  return make_series(depth, seed, scale, [](int k) { return (k + 1) * std::ldexp(1.0, -k); });
}

LacunarySeries lipschitz_series(int depth, std::uint64_t seed, double scale) {
  return make_series(depth, seed, scale, [](int k) { return std::ldexp(1.0, -2 * k); });
}

Samples sample_periodic(const LacunarySeries& f, int points) {
  Samples s;
  s.spacing = 2.0 * std::numbers::pi / points;
  s.periodic = true;
  s.values.resize(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) s.values[static_cast<std::size_t>(i)] = f(i * s.spacing);
  return s;
}

DyadicLLReport dyadic_ll_bounds(const CutoffSystem& cs, const Samples& a, int k_max) {
  const auto u = periodic_field(a);
  DyadicLLReport rep;
  rep.ll_norm = ll_seminorm(a).norm();
  if (!(rep.ll_norm > 0.0)) throw DomainError("log-Lipschitz norm vanishes");
  for (int k = 0; k <= k_max; ++k) {
    const double scale = (k + 1) * std::ldexp(1.0, -k) * rep.ll_norm;
    const auto sk = low_pass(cs, u, k);
    rep.k.push_back(k);
    rep.block_ratio.push_back(sup_norm(block(cs, u, k)) / scale);
    rep.tail_ratio.push_back(sup_norm(u - sk) / scale);
    const double lip = sup_norm(sk) + sup_norm(derivative(sk, 0));
    rep.lipschitz_ratio.push_back(lip / ((k + 1) * rep.ll_norm));
  }
  return rep;
}

IncrementReport lz_increment_ratios(const LacunarySeries& a, double gamma,
                                    const std::vector<double>& tau, int points) {
  if (points < 16) throw DomainError("increment probe needs at least 16 sample times");
  IncrementReport rep;
  const double h = 2.0 * std::numbers::pi / points;
  for (double t : tau) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("increment step must lie in (0, 1)");
    double best = 0.0;
    for (int i = 0; i < points; ++i) best = std::max(best, std::abs(a(i * h + t) - a(i * h)));
    const double lg = std::log(1.0 + gamma + 1.0 / t);
    rep.tau.push_back(t);
    rep.ratio.push_back(best / (t * lg * lg));
  }
  if (rep.tau.size() >= 2) rep.slope = log_log_slope(rep.tau, rep.ratio);
  return rep;
}

}  // namespace lpwave
