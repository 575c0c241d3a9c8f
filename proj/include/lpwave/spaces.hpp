#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lpwave/dyadic.hpp"
#include "lpwave/grid.hpp"

namespace lpwave {

/// Index of a (possibly logarithmic, possibly gamma-dependent) Sobolev norm.
/// gamma = 0 selects the classical weights (1 + |xi|^2)^{s/2} log^alpha(2 + |xi|).
struct NormSpec {
  double s = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
};

void validate(const NormSpec& spec);

/// Weight of the norm at |xi| = r.
double sobolev_weight(const NormSpec& spec, double r);

/// sqrt(sum_k weight(|k|)^2 |u^(k)|^2). Norms in this module use the
/// normalized measure, so s = alpha = 0 gives coefficient_norm(u).
double sobolev_norm(const SpectralField& u, const NormSpec& spec);

/// l2 norm of delta_k = 2^{ks} (1 + k)^alpha ||Delta_k u||.
double dyadic_norm(const CutoffSystem& cs, const SpectralField& u, const NormSpec& spec);

/// Real samples of a function of one variable on a uniform grid.
struct Samples {
  std::vector<double> values;
  double spacing = 0.0;
  /// Periodic samples wrap around; otherwise only pairs inside the range are used.
  bool periodic = true;
};

enum class ModulusKind { ll, lz };

struct ModulusReport {
  ModulusKind kind = ModulusKind::ll;
  double seminorm = 0.0;
  double sup_norm = 0.0;
  /// Filled by lz_dyadic_indicator when requested; negative when not computed.
  double dyadic_indicator = -1.0;
  double spacing = 0.0;
  /// |y| at which the supremum was attained and the largest |y| tested.
  double argmax_offset = 0.0;
  double max_offset = 0.0;
  std::size_t offsets_tested = 0;

  double norm() const { return sup_norm + seminorm; }
};

/// sup |f(x+y) - f(x)| / (|y| log(1 + 1/|y|)) over grid pairs with 0 < |y| < 1.
/// All offsets up to 64 grid steps are used, then a geometric ladder; the
/// result is a lower bound for the continuous supremum.
ModulusReport ll_seminorm(const Samples& f);
/// Same with the symmetric second difference f(x+y) + f(x-y) - 2 f(x).
ModulusReport lz_seminorm(const Samples& g);
/// sup_nu 2^nu (nu + 1)^-1 ||Delta_nu g||_inf for periodic samples of length 2^n on [0, 2pi).
double lz_dyadic_indicator(const CutoffSystem& cs, const Samples& g);

/// sum_k amplitude_k cos(frequency_k x + phase_k).
struct LacunarySeries {
  std::vector<double> amplitude;
  std::vector<double> frequency;
  std::vector<double> phase;

  double operator()(double x) const;
  double derivative(double x, int order) const;
  bool empty() const { return amplitude.empty(); }
};

/// sum_{k=1}^{depth} 2^-k cos(2^k x + phase_k): log-Lipschitz.
LacunarySeries ll_series(int depth, std::uint64_t seed, double scale = 1.0);
/// sum_{k=1}^{depth} (k+1) 2^-k cos(2^k x + phase_k): log-Zygmund, not log-Lipschitz.
LacunarySeries lz_series(int depth, std::uint64_t seed, double scale = 1.0);
/// sum_{k=1}^{depth} 4^-k cos(2^k x + phase_k): Lipschitz.
LacunarySeries lipschitz_series(int depth, std::uint64_t seed, double scale = 1.0);

/// Periodic samples of a series on M points of [0, 2pi).
Samples sample_periodic(const LacunarySeries& f, int points);

struct DyadicLLReport {
  std::vector<int> k;
  /// ||Delta_k a||_inf / ((k+1) 2^-k ||a||_LL)
  std::vector<double> block_ratio;
  /// ||a - S_k a||_inf / ((k+1) 2^-k ||a||_LL)
  std::vector<double> tail_ratio;
  /// ||S_k a||_Lip / ((k+1) ||a||_LL), Lipschitz norm = sup + sup of the gradient.
  std::vector<double> lipschitz_ratio;
  double ll_norm = 0.0;
};

/// Dyadic bounds for a log-Lipschitz function given by periodic samples.
DyadicLLReport dyadic_ll_bounds(const CutoffSystem& cs, const Samples& a, int k_max);

struct IncrementReport {
  std::vector<double> tau;
  /// sup_t |a(t + tau) - a(t)| / (tau log^2(1 + gamma + 1/tau))
  std::vector<double> ratio;
  double slope = 0.0;
};

/// First increments of a log-Zygmund series measured on `points` sample times.
IncrementReport lz_increment_ratios(const LacunarySeries& a, double gamma,
                                    const std::vector<double>& tau, int points);

}  // namespace lpwave
