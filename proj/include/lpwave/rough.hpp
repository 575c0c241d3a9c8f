#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "lpwave/grid.hpp"
#include "lpwave/spaces.hpp"

namespace lpwave {

/// Even bump rho(s) = exp(-1/(1 - s^2)) / Z on (-1, 1) with unit mass.
class MollifierKernel {
 public:
  static const MollifierKernel& standard();

  double rho(double s) const;
  double rho_derivative(double s) const;
  /// Normalization Z = int exp(-1/(1 - s^2)) ds.
  double normalization() const noexcept { return z_; }
  /// int s^q rho(s) ds for even q (odd moments vanish).
  double moment(int q) const;
  /// int rho(s) cos(w s) ds, cached per frequency.
  double fourier(double w) const;

 private:
  MollifierKernel();
  struct Cache;
  double z_;
  std::vector<double> moments_;
  std::shared_ptr<Cache> cache_;
};

/// amplitude * cos(omega t + k.x + phase)
struct TrigTerm {
  double amplitude = 0.0;
  double omega = 0.0;
  Frequency k{0, 0};
  double phase = 0.0;
};

/// coefficient * t^power
struct PolyTerm {
  double coefficient = 0.0;
  int power = 0;
};

/// One matrix entry: base + trigonometric terms + polynomial in t.
struct EntrySeries {
  double base = 0.0;
  std::vector<TrigTerm> terms;
  std::vector<PolyTerm> poly;

  /// Sum of |amplitude| over the trigonometric terms.
  double amplitude_sum() const;
};

enum class TimeRegularity { none, log_zygmund, lipschitz };
enum class SpaceRegularity { none, log_lipschitz, lipschitz };

/// Recipe for a synthetic coefficient matrix.
struct CoefficientProfile {
  int dim = 1;
  /// a11, a12, a22; a12 and a22 are ignored in one dimension.
  std::array<double, 3> base{2.0, 0.0, 2.0};
  double amplitude = 0.0;
  TimeRegularity time_kind = TimeRegularity::log_zygmund;
  int time_depth = 12;
  SpaceRegularity space_kind = SpaceRegularity::log_lipschitz;
  int space_depth = 7;
  /// Scale of the product terms f(t) g(x); these make time derivatives x-dependent.
  double mixed_amplitude = 0.0;
  std::uint64_t seed = 1;
  double t_begin = -1.0;
  double t_end = 8.0;
  /// Ellipticity sweep resolution.
  int sweep_times = 129;
  int sweep_points = 64;
};

/// Point where ellipticity was measured to be smallest or largest.
struct SweepExtreme {
  double value = 0.0;
  double t = 0.0;
  std::array<double, 2> x{};
  std::array<double, 2> xi{};
};

/// Symmetric matrix a_ij(t, x) held as analytic series, optionally mollified in time.
class CoefficientField {
 public:
  CoefficientField(int dim, std::vector<EntrySeries> entries, double t_begin, double t_end);

  int dim() const noexcept { return dim_; }
  /// Entry (i, j), symmetric; entries are stored as a11 [, a12, a22].
  const EntrySeries& entry(int i, int j) const;
  double epsilon() const noexcept { return epsilon_; }
  double t_begin() const noexcept { return t_begin_; }
  double t_end() const noexcept { return t_end_; }

  /// d^order/dt^order a_ij(t, x) (of the mollified entry when epsilon > 0).
  double value(int i, int j, double t, const std::array<double, 2>& x, int order = 0) const;
  /// a_ij(t, .) on every grid point, row-major.
  std::vector<double> sample(int i, int j, double t, const TorusGrid& grid, int order = 0) const;
  /// sum a_ij xi_i xi_j
  double quadratic_form(double t, const std::array<double, 2>& x, const std::array<double, 2>& xi,
                        int order = 0) const;

  /// Certified bounds from base eigenvalues and amplitude sums.
  double lambda0_bound() const noexcept { return lambda0_bound_; }
  double Lambda0_bound() const noexcept { return Lambda0_bound_; }
  /// Extremes found by the sampled eigenvalue sweep.
  const SweepExtreme& sweep_min() const noexcept { return sweep_min_; }
  const SweepExtreme& sweep_max() const noexcept { return sweep_max_; }
  /// Hyperbolicity constants: the sweep extremes.
  double lambda0() const noexcept { return sweep_min_.value; }
  double Lambda0() const noexcept { return sweep_max_.value; }
  /// Measured modulus constant: largest LZ-in-t / LL-in-x norm over the entries.
  double K0() const noexcept { return k0_; }

  /// Largest |omega| and largest |k|_inf over all terms.
  double max_time_frequency() const;
  int max_space_frequency() const;
  bool is_constant_in_time() const;
  bool is_constant_in_space() const;

  /// Runs the sweep; throws EllipticityError at the first nonpositive eigenvalue.
  void measure(int sweep_times, int sweep_points);

 private:
  friend CoefficientField smooth_in_time(const CoefficientField& a, double epsilon);
  int dim_;
  std::vector<EntrySeries> entries_;
  double t_begin_, t_end_;
  double epsilon_ = 0.0;
  double lambda0_bound_ = 0.0, Lambda0_bound_ = 0.0;
  SweepExtreme sweep_min_, sweep_max_;
  double k0_ = 0.0;
};

/// Builds a_ij = base_ij + amplitude (f_ij(t) + g_ij(x)) + mixed_amplitude f_ij(t) g_ij(x).
CoefficientField make_coefficients(const CoefficientProfile& profile);

/// Constant matrix (amplitude zero) on the given window.
CoefficientField constant_coefficients(int dim, std::array<double, 3> base, double t_begin = -1.0,
                                       double t_end = 8.0);

/// a_eps = rho_eps * a in t; the window shrinks by epsilon at both ends.
CoefficientField smooth_in_time(const CoefficientField& a, double epsilon);

struct MollifierFit {
  double gamma = 1.0;
  std::vector<double> epsilon;
  std::vector<double> sup_difference;  // sup |a_eps - a|
  std::vector<double> sup_first;       // sup |d_t a_eps|
  std::vector<double> sup_second;      // sup |d_t^2 a_eps|
  /// The suprema divided by eps log(.), log^2(.), eps^-1 log(.) and by K0.
  std::vector<double> ratio_difference, ratio_first, ratio_second;
  double slope_difference = 0.0, slope_first = 0.0, slope_second = 0.0;
  /// Largest ratio in each family: the fitted constants.
  double c_difference = 0.0, c_first = 0.0, c_second = 0.0;
  bool passed = false;
};

/// Mollification estimates of entry (0, 0) at x = 0, suprema over `points`
/// equispaced times in [t0, t0 + 1]. A family with all-zero suprema has slope 0.
std::vector<MollifierFit> mollifier_bound_fit(const CoefficientField& a,
                                              const std::vector<double>& gammas,
                                              const std::vector<double>& epsilons,
                                              int points = 1 << 16, double t0 = 1.0,
                                              double tolerance = 0.15);

}  // namespace lpwave
