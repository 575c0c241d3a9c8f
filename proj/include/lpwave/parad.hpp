#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpwave/dyadic.hpp"
#include "lpwave/grid.hpp"
#include "lpwave/rough.hpp"

namespace lpwave {

/// psi_mu(eta, xi) = chi_mu(eta) chi_{mu+2}(xi) + sum_{k >= mu+3} chi_{k-3}(eta) phi_k(xi)
/// on a grid, with the measured support ratios eps1, eps2.
class ParamCutoff {
 public:
  /// mu >= -2, gamma >= 1, 2^{mu+3} <= M/2.
  ParamCutoff(const TorusGrid& grid, int mu, double gamma, CutoffSystem cs = CutoffSystem());

  const TorusGrid& grid() const noexcept { return grid_; }
  int mu() const noexcept { return mu_; }
  double gamma() const noexcept { return gamma_; }
  const CutoffSystem& cutoff_system() const noexcept { return cs_; }

  double psi(double eta_norm, double xi_norm) const;
  /// Derivative of psi in |xi| at fixed |eta|.
  double psi_dxi(double eta_norm, double xi_norm) const;
  /// Largest |eta| with psi > 0 and smallest |eta| with psi < 1, at the given |xi|.
  double support_radius(double xi_norm) const;
  double unit_radius(double xi_norm) const;

  /// psi = 1 for |eta| <= eps1 (gamma + |xi|) and psi = 0 for |eta| >= eps2 (gamma + |xi|),
  /// measured over |xi| in [0, sqrt(N) M/2].
  double eps1() const noexcept { return eps1_; }
  double eps2() const noexcept { return eps2_; }

  struct Entry {
    Frequency eta;
    double psi;
  };
  /// Nonzero psi(eta, xi) for the lattice point xi (cached).
  const std::vector<Entry>& row(std::size_t xi_flat) const;

 private:
  struct Rows;
  TorusGrid grid_;
  int mu_;
  double gamma_;
  CutoffSystem cs_;
  double eps1_ = 0.0, eps2_ = 0.0;
  std::shared_ptr<Rows> rows_;
};

ParamCutoff make_cutoff(int mu, double gamma, const TorusGrid& grid);
/// The cutoff paired with gamma = 2^{mu+2}: mu = log2(gamma) - 2, gamma a power of two.
ParamCutoff cutoff_for_gamma(double gamma, const TorusGrid& grid);

/// Symbol a(x, xi) of order m + delta log on a grid.
///
/// Either x-independent (a multiplier) or given column by column: column(xi, out)
/// fills out[p] = a(x_p, xi) on every grid point.
struct ParamSymbol {
  double order = 0.0;
  double log_order = 0.0;
  bool x_independent = false;
  /// The column does not depend on xi (a function of x alone).
  bool xi_independent = false;
  std::function<Complex(const Frequency&)> multiplier;
  std::function<void(const Frequency&, std::span<Complex>)> column;

  /// Values a(x_p, xi) for all grid points (x-independent symbols broadcast).
  std::vector<Complex> values(const TorusGrid& grid, const Frequency& xi) const;
};

ParamSymbol multiplier_symbol(double order, std::function<Complex(const Frequency&)> m);
/// Lambda(xi, gamma)^power.
ParamSymbol lambda_symbol(double gamma, double power);
/// a(x) as an order-0 symbol from real samples on the grid.
ParamSymbol function_symbol(std::vector<double> samples);
ParamSymbol product(const ParamSymbol& a, const ParamSymbol& b);
ParamSymbol conjugate(const ParamSymbol& a);
ParamSymbol scaled(const ParamSymbol& a, Complex c);

struct ParadStats {
  /// Sum of |contribution|^2 to frequencies outside the lattice (dropped).
  double aliasing_mass = 0.0;
  std::size_t pairs = 0;
  /// Largest |eta| / (gamma + |xi|) among the pairs that contributed.
  double max_support_ratio = 0.0;
};

/// (T_a u)^(zeta) = sum_{eta + xi = zeta} psi(eta, xi) a^(eta, xi) u^(xi).
/// Only xi with u^(xi) != 0 are visited.
SpectralField apply_parad(const ParamCutoff& cutoff, const ParamSymbol& a, const SpectralField& u,
                          ParadStats* stats = nullptr);
/// Exact L2 adjoint of T_a: the conjugate transpose of the twisted convolution.
SpectralField apply_parad_adjoint(const ParamCutoff& cutoff, const ParamSymbol& a,
                                  const SpectralField& u);
/// sigma_a(x_p, xi) = (G^psi(., xi) * a(., xi))(x_p) on the grid.
std::vector<Complex> classical_symbol(const ParamCutoff& cutoff, const ParamSymbol& a,
                                      const Frequency& xi);

// ---------------------------------------------------------------------------

struct KernelSample {
  double xi = 0.0;
  /// Index f = 2 alpha + beta for (|alpha|, |beta|) in {0,1}^2.
  std::array<double, 4> l1{};
  std::array<double, 4> weighted_l1{};
  std::array<double, 4> ratio{};
  std::array<double, 4> weighted_ratio{};
  /// Families that vanish identically at this xi (psi constant in xi there).
  std::array<bool, 4> structural_zero{};
  /// integral of d_x G (machine zero).
  double moment = 0.0;
  /// Fraction of the L1 mass of G within 10% of the cell boundary.
  double boundary_mass = 0.0;
  bool aliasing_flag = false;
};

struct KernelReport {
  double gamma = 1.0;
  int mu = 0;
  std::vector<KernelSample> samples;
};

/// L1 norms of d_x^beta d_xi^alpha G^psi and of their |x| log(2 + 1/|x|) weighted versions,
/// against (gamma + |xi|)^{-alpha+beta} and (gamma + |xi|)^{-alpha+beta-1} log(1 + gamma + |xi|).
/// Norms use the normalized measure; xi runs along the first axis.
KernelReport kernel_bounds_probe(const ParamCutoff& cutoff, const std::vector<int>& xi_samples,
                                 int oversampling = 4);

/// max/min of the nonzero ratios of one family over several reports.
double kernel_spread(const std::vector<KernelReport>& reports, int family, bool weighted);

// ---------------------------------------------------------------------------

/// alpha(x, xi) = Lambda^{-1} (gamma^2 + sum a_ij(t, x) xi_i xi_j)^{1/2} at a fixed time,
/// from a (typically mollified) coefficient.
class AlphaSymbol {
 public:
  AlphaSymbol(const CoefficientField& a, double gamma, double t, const TorusGrid& grid);

  double gamma() const noexcept { return gamma_; }
  double value(std::size_t point, const Frequency& xi) const;
  /// d_t alpha at a grid point.
  double time_derivative(std::size_t point, const Frequency& xi) const;

  /// alpha^p, order 0.
  ParamSymbol power(double p) const;
  /// alpha^{1/2} Lambda, order 1.
  ParamSymbol half_lambda() const;
  /// alpha^2 Lambda^2, order 2.
  ParamSymbol squared_lambda() const;
  /// d_t (alpha^{-1/2}) = -1/2 alpha^{-3/2} d_t alpha, order 0.
  ParamSymbol dt_inverse_sqrt() const;

  /// Pointwise bounds min(1, sqrt(lambda0)) <= alpha <= max(1, sqrt(Lambda0)).
  double lower_bound() const noexcept { return lower_; }
  double upper_bound() const noexcept { return upper_; }

 private:
  double quadratic(std::size_t point, const Frequency& xi, bool derivative) const;
  int dim_;
  double gamma_;
  std::shared_ptr<const std::vector<std::vector<double>>> a_, da_;
  double lower_, upper_;
};

AlphaSymbol alpha_symbol(const CoefficientField& a_eps, double gamma, double t,
                         const TorusGrid& grid);

struct GammaChoice {
  bool found = false;
  double gamma = 0.0;
  int mu = 0;
  double lambda0 = 0.0;
  /// Smallest observed lhs/rhs of the two inequalities at the returned gamma
  /// (or at the largest tried gamma when none works).
  double margin_l2 = 0.0;
  double margin_h1 = 0.0;
  std::size_t worst_probe = 0;
  double worst_time = 0.0;
  int worst_nu = 0;
  std::vector<double> tried;
};

struct GammaSearch {
  std::vector<double> times{0.0};
  std::vector<int> nus{0, 2, 4, 6};
  int max_log2_gamma = 6;
  double margin = 1.05;
};

/// Smallest gamma in {1, 2, 4, ...} with ||T_{alpha^{-1/2}} w|| >= (lambda0/2) ||w|| and
/// ||T_{alpha^{1/2} Lambda} w|| >= (lambda0/2) ||w||_{H^1_gamma} on every probe,
/// with the given margin, for every time and mollification scale 2^-nu.
GammaChoice choose_gamma_mu(const CoefficientField& a, const std::vector<SpectralField>& probes,
                            const GammaSearch& search = {});

struct PositivityReport {
  std::vector<double> ratios;
  double min_ratio = 0.0;
  std::size_t worst_probe = 0;
  bool positive = false;
};

/// Re(T_a u, u) / ||u||^2_{H^{m/2}_gamma} over the probes, normalized measure.
PositivityReport positivity_probe(const ParamCutoff& cutoff, const ParamSymbol& a,
                                  const std::vector<SpectralField>& probes);

struct RemainderRing {
  int j = 0;
  double composition = 0.0;  // max ||(T_a T_b - T_ab) u|| / ||u||
  double adjoint = 0.0;      // max ||(T_a^* - T_conj(a)) u|| / ||u||
};

struct RemainderReport {
  std::vector<RemainderRing> rings;
  double composition_bound = 0.0;  // m + m' - 1
  double adjoint_bound = 0.0;      // m - 1
  /// Slopes of log ratio against log 2^j, raw and after dividing by (j + 1).
  double composition_slope_raw = 0.0, composition_slope = 0.0;
  double adjoint_slope_raw = 0.0, adjoint_slope = 0.0;
  /// Largest composition and adjoint ratio with the (j+1) factor removed.
  double composition_constant = 0.0, adjoint_constant = 0.0;
  /// Composition remainder below 1e-13 relative on every ring.
  bool composition_zero = false;
  bool passed = false;
};

/// Ring probes probes[r] live in ring rings[r]; tolerance applies to the log-corrected slopes.
RemainderReport remainder_probe(const ParamCutoff& cutoff, const ParamSymbol& a,
                                const ParamSymbol& b, const std::vector<int>& rings,
                                const std::vector<std::vector<SpectralField>>& probes,
                                double tolerance = 0.1);

struct SymbolFamily {
  std::string name;
  /// ratio[e][x] for epsilon index e and xi index x (sup over space).
  std::vector<std::vector<double>> ratio;
  double slope_eps = 0.0;  // of max-over-xi ratio against epsilon
  double slope_xi = 0.0;   // of max-over-epsilon ratio against gamma + |xi|
  double max_ratio = 0.0;
  bool identically_zero = false;
};

struct SymbolBoundsReport {
  std::vector<double> epsilon;
  std::vector<int> xi;
  /// Families: sigma, d_x sigma, sigma of d_t, d_x sigma of d_t, sigma of d_t^2,
  /// d_x sigma of d_t^2; each at |alpha| = 0 and 1 (12 entries, alpha fastest).
  std::vector<SymbolFamily> families;
};

/// Bounds on classical symbols of a_eps (entry (0,0)) and its time derivatives at time t;
/// xi-derivatives by centered lattice differences with step 1.
SymbolBoundsReport symbol_derivative_bounds(const CoefficientField& a, const ParamCutoff& cutoff,
                                            const std::vector<double>& epsilons,
                                            const std::vector<int>& xi_samples, double t);

}  // namespace lpwave
