#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lpwave/grid.hpp"
#include "lpwave/rough.hpp"

namespace lpwave {

/// d_t^2 u = sum_ij d_i (a_ij d_j u) + f on the torus.
struct CauchyProblem {
  CoefficientField coefficients;
  SpectralField initial_u;
  SpectralField initial_ut;
  /// Empty means f = 0.
  std::function<SpectralField(double)> forcing;
  double horizon = 1.0;
  /// 0 selects min(cfl h / sqrt(Lambda0), 0.25 / max time frequency), shrunk so that
  /// horizon / dt is an integer.
  double dt = 0.0;
  double cfl = 0.2;
  int snapshot_every = 1;
};

struct Trajectory {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<SpectralField> u;
  std::vector<SpectralField> ut;
  /// Lu at each snapshot from differences of ut; zero fields when f = 0.
  std::vector<SpectralField> residual;
};

/// sum_ij d_i (a_ij(t, .) d_j u): spectral derivatives, pointwise products, 2/3-rule truncation.
SpectralField spatial_operator(const CoefficientField& a, double t, const SpectralField& u);

/// Largest |k| (per axis) kept by the 2/3 rule.
int dealiasing_limit(const TorusGrid& grid);

/// The step solve() would use for the problem.
double choose_time_step(const CauchyProblem& problem);

/// Classical fourth-order Runge-Kutta on (u, d_t u).
Trajectory solve(const CauchyProblem& problem);

/// ||d_t u||^2 + (a grad u, grad u), true L2 on the torus.
double wave_energy(const CoefficientField& a, double t, const SpectralField& u,
                   const SpectralField& ut);

}  // namespace lpwave
