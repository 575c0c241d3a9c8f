#include "lpwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lpwave/errors.hpp"

namespace lpwave {

int dealiasing_limit(const TorusGrid& grid) { return grid.points_per_axis() / 3; }

namespace {

bool in_band(const Frequency& k, int limit) {
  return std::abs(k[0]) <= limit && std::abs(k[1]) <= limit;
}

void check_headroom(std::span<const Complex> c, const TorusGrid& g) {
  const int limit = dealiasing_limit(g);
  double total = 0.0, outside = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double m = std::norm(c[i]);
    total += m;
    if (!in_band(g.frequency(i), limit)) outside += m;
  }
  if (outside > 1e-24 * total && outside > 0.0)
    throw DealiasingError("field has content beyond the 2/3 band |k| <= " + std::to_string(limit));
}

// Works on coefficient vectors; a_samples[e] holds entry e (a11 [, a12, a22]) on the grid.
void apply_operator(const TorusGrid& g, const std::vector<std::vector<double>>& a_samples,
                    std::span<const Complex> uh, std::span<Complex> out) {
  const int dim = g.dim();
  const int limit = dealiasing_limit(g);
  const std::size_t n = g.size();
  std::array<std::vector<Complex>, 2> grad;
  std::vector<Complex> tmp(n);
  for (int j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const int k = g.frequency(i)[static_cast<std::size_t>(j)];
      tmp[i] = k == -g.nyquist() ? Complex(0.0) : Complex(0.0, k) * uh[i];
    }
    grad[j].resize(n);
    g.inverse(tmp, grad[j]);
  }
  std::fill(out.begin(), out.end(), Complex(0.0));
  std::vector<Complex> flux(n), fh(n);
  for (int i = 0; i < dim; ++i) {
    for (std::size_t p = 0; p < n; ++p) {
      Complex s = 0.0;
      for (int j = 0; j < dim; ++j) s += a_samples[static_cast<std::size_t>(i + j)][p] * grad[j][p];
      flux[p] = s;
    }
    g.forward(flux, fh);
    for (std::size_t q = 0; q < n; ++q) {
      const auto k = g.frequency(q);
      if (!in_band(k, limit)) continue;
      out[q] += Complex(0.0, k[static_cast<std::size_t>(i)]) * fh[q];
    }
  }
}

std::vector<std::vector<double>> sample_matrix(const CoefficientField& a, double t,
                                               const TorusGrid& g) {
  std::vector<std::vector<double>> s;
  s.push_back(a.sample(0, 0, t, g));
  if (a.dim() == 2) {
    s.push_back(a.sample(0, 1, t, g));
    s.push_back(a.sample(1, 1, t, g));
  }
  return s;
}

void check_coefficient_band(const CoefficientField& a, const TorusGrid& g) {
  if (a.dim() != g.dim()) throw DimensionError("coefficient and grid dimensions differ");
  if (a.max_space_frequency() > dealiasing_limit(g))
    throw DealiasingError("coefficient wave number " + std::to_string(a.max_space_frequency()) +
                          " exceeds the 2/3 band of the grid");
}

}  // namespace

SpectralField spatial_operator(const CoefficientField& a, double t, const SpectralField& u) {
  const auto& g = u.grid();
  check_coefficient_band(a, g);
  const auto uh = u.coefficients();
  check_headroom(uh, g);
  std::vector<Complex> out(g.size());
  apply_operator(g, sample_matrix(a, t, g), uh, out);
  return SpectralField::from_coefficients(g, std::move(out), u.parity());
}

double choose_time_step(const CauchyProblem& p) {
  if (!(p.horizon > 0.0)) throw ConfigurationError("horizon must be positive");
  const auto& g = p.initial_u.grid();
  const double limit = p.cfl * g.spacing() / std::sqrt(p.coefficients.Lambda0());
  if (p.dt > 0.0) {
    if (p.dt > limit * (1.0 + 1e-12))
      throw ConfigurationError("time step " + std::to_string(p.dt) + " violates the CFL bound " +
                               std::to_string(limit));
    return p.dt;
  }
  double dt = limit;
  const double w = p.coefficients.max_time_frequency();
  if (w > 0.0) dt = std::min(dt, 0.25 / w);
  const double steps = std::ceil(p.horizon / dt - 1e-9);
  return p.horizon / steps;
}

Trajectory solve(const CauchyProblem& p) {
  const auto& g = p.initial_u.grid();
  if (!(p.initial_ut.grid() == g)) throw DimensionError("initial data live on different grids");
  check_coefficient_band(p.coefficients, g);
  if (p.horizon > p.coefficients.t_end() || p.coefficients.t_begin() > 0.0)
    throw ConfigurationError("horizon leaves the coefficient time window");
  if (p.snapshot_every < 1) throw ConfigurationError("snapshot cadence must be >= 1");
  const double dt = choose_time_step(p);
  const auto steps = static_cast<long>(std::floor(p.horizon / dt + 1e-9));
  const std::size_t n = g.size();
  std::vector<Complex> u(p.initial_u.coefficients().begin(), p.initial_u.coefficients().end());
  std::vector<Complex> v(p.initial_ut.coefficients().begin(), p.initial_ut.coefficients().end());
  check_headroom(u, g);
  check_headroom(v, g);
  const Parity parity = p.initial_u.parity() == Parity::real && p.initial_ut.parity() == Parity::real
                            ? Parity::real
                            : Parity::complex;

  Trajectory traj;
  traj.dt = dt;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.u.push_back(SpectralField::from_coefficients(g, u, parity));
    traj.ut.push_back(SpectralField::from_coefficients(g, v, parity));
  };
  // acceleration A(t) u + f(t)
  std::vector<Complex> fbuf;
  auto accel = [&](double t, const std::vector<std::vector<double>>& a, std::span<const Complex> uu,
                   std::span<Complex> out) {
    apply_operator(g, a, uu, out);
    if (p.forcing) {
      const auto f = p.forcing(t);
      const auto fc = f.coefficients();
      for (std::size_t i = 0; i < n; ++i) out[i] += fc[i];
    }
  };
  record(0.0);
  std::vector<Complex> k1u(n), k1v(n), k2u(n), k2v(n), k3u(n), k3v(n), k4u(n), k4v(n), tu(n), tv(n);
  double last_valid = 0.0;
  for (long s = 0; s < steps; ++s) {
    const double t = s * dt;
    const auto a0 = sample_matrix(p.coefficients, t, g);
    const auto ah = sample_matrix(p.coefficients, t + 0.5 * dt, g);
    const auto a1 = sample_matrix(p.coefficients, t + dt, g);
    k1u = v;
    accel(t, a0, u, k1v);
    for (std::size_t i = 0; i < n; ++i) {
      tu[i] = u[i] + 0.5 * dt * k1u[i];
      tv[i] = v[i] + 0.5 * dt * k1v[i];
    }
    k2u = tv;
    accel(t + 0.5 * dt, ah, tu, k2v);
    for (std::size_t i = 0; i < n; ++i) {
      tu[i] = u[i] + 0.5 * dt * k2u[i];
      tv[i] = v[i] + 0.5 * dt * k2v[i];
    }
    k3u = tv;
    accel(t + 0.5 * dt, ah, tu, k3v);
    for (std::size_t i = 0; i < n; ++i) {
      tu[i] = u[i] + dt * k3u[i];
      tv[i] = v[i] + dt * k3v[i];
    }
    k4u = tv;
    accel(t + dt, a1, tu, k4v);
    double norm = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      u[i] += dt / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
      v[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
      norm += std::norm(u[i]) + std::norm(v[i]);
      finite = finite && std::isfinite(u[i].real()) && std::isfinite(u[i].imag()) &&
               std::isfinite(v[i].real()) && std::isfinite(v[i].imag());
    }
    if (!finite || std::sqrt(norm) > 1e12)
      throw BlowUpError("solution norm exceeded 1e12 after t = " + std::to_string(last_valid),
                        last_valid);
    last_valid = (s + 1) * dt;
    if ((s + 1) % p.snapshot_every == 0) record((s + 1) * dt);
  }
  // residual Lu = d_t(u_t) - A u from the recorded velocities
  const std::size_t m = traj.times.size();
  for (std::size_t k = 0; k < m; ++k) {
    if (!p.forcing || m < 3) {
      traj.residual.push_back(SpectralField::zero(g));
      continue;
    }
    const auto vk = [&](std::size_t i) { return traj.ut[i].coefficients(); };
    std::vector<Complex> acc(n);
    if (k == 0) {
      const double h = traj.times[1] - traj.times[0];
      for (std::size_t i = 0; i < n; ++i)
        acc[i] = (-3.0 * vk(0)[i] + 4.0 * vk(1)[i] - vk(2)[i]) / (2.0 * h);
    } else if (k + 1 == m) {
      const double h = traj.times[k] - traj.times[k - 1];
      for (std::size_t i = 0; i < n; ++i)
        acc[i] = (3.0 * vk(k)[i] - 4.0 * vk(k - 1)[i] + vk(k - 2)[i]) / (2.0 * h);
    } else {
      const double h = traj.times[k + 1] - traj.times[k - 1];
      for (std::size_t i = 0; i < n; ++i) acc[i] = (vk(k + 1)[i] - vk(k - 1)[i]) / h;
    }
    std::vector<Complex> au(n);
    apply_operator(g, sample_matrix(p.coefficients, traj.times[k], g), traj.u[k].coefficients(), au);
    for (std::size_t i = 0; i < n; ++i) acc[i] -= au[i];
    traj.residual.push_back(SpectralField::from_coefficients(g, std::move(acc), parity));
  }
  return traj;
}

double wave_energy(const CoefficientField& a, double t, const SpectralField& u,
                   const SpectralField& ut) {
  const auto& g = u.grid();
  std::vector<Complex> au(g.size());
  apply_operator(g, sample_matrix(a, t, g), u.coefficients(), au);
  // (a grad u, grad u) = -(div a grad u, u)
  Complex pair = 0.0;
  const auto uc = u.coefficients();
  for (std::size_t i = 0; i < au.size(); ++i) pair += au[i] * std::conj(uc[i]);
  const double v = l2_norm(ut);
  return v * v - g.volume() * pair.real();
}

}  // namespace lpwave
