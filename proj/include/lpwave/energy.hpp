#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lpwave/dyadic.hpp"
#include "lpwave/parad.hpp"
#include "lpwave/rough.hpp"
#include "lpwave/solver.hpp"

namespace lpwave {

struct EnergyConfig {
  double theta = 0.5;
  double beta = 1.0;
  double gamma = 1.0;
  int mu = 0;
  /// Negative selects default_nu_max(grid).
  int nu_max = -1;
  double horizon = 1.0;

  double beta_star() const;
  /// theta in (0, 1), beta > 0, theta + beta* T < 1.
  void validate() const;
};

/// ceil(log2(M / 3)): the last block meeting the dealiased band of the solver.
int default_nu_max(const TorusGrid& grid);

struct TaramaComponents {
  SpectralField v;
  SpectralField w;
  SpectralField z;
};

/// Per-block energy machinery: mollified coefficients a_{2^-nu} and the frozen cutoff psi_mu.
class EnergyFunctional {
 public:
  EnergyFunctional(const CoefficientField& a, const EnergyConfig& cfg, const TorusGrid& grid,
                   CutoffSystem cs = CutoffSystem());

  const EnergyConfig& config() const noexcept { return cfg_; }
  int nu_max() const noexcept { return nu_max_; }
  const TorusGrid& grid() const noexcept { return cutoff_.grid(); }
  const ParamCutoff& cutoff() const noexcept { return cutoff_; }
  const CutoffSystem& cutoff_system() const noexcept { return cutoff_.cutoff_system(); }
  const CoefficientField& coefficients() const noexcept { return a_; }
  /// a mollified in time at epsilon = 2^-nu.
  const CoefficientField& mollified(int nu) const;

  /// Worker threads for the per-block loop (1 = sequential).
  void set_threads(int threads);
  int threads() const noexcept { return threads_; }

 private:
  CoefficientField a_;
  EnergyConfig cfg_;
  int nu_max_;
  ParamCutoff cutoff_;
  std::vector<CoefficientField> mollified_;
  int threads_ = 1;
};

/// v = T_{alpha^-1/2} d_t u_nu - T_{d_t(alpha^-1/2)} u_nu, w = T_{alpha^1/2 Lambda} u_nu, z = u_nu.
TaramaComponents tarama_components(const EnergyFunctional& ef, const SpectralField& u,
                                   const SpectralField& ut, int nu, double t);

/// ||v||^2 + ||w||^2 + ||z||^2 in L2 of the torus.
double block_energy(const SpectralField& v, const SpectralField& w, const SpectralField& z);

/// e^{-2 beta (nu + 1) t} 2^{-2 nu theta}
double energy_weight(double beta, double theta, int nu, double t);
double weighted_energy(const std::vector<double>& e, double beta, double theta, double t);

struct BlockEnergies {
  double t = 0.0;
  std::vector<double> e;
  /// ||u - S_{nu_max} u|| / ||u||; the sum misses this part of u.
  double tail_fraction = 0.0;
  bool truncation_warning = false;
};

/// e_nu for nu = 0..nu_max at time t.
BlockEnergies block_energies(const EnergyFunctional& ef, const SpectralField& u,
                             const SpectralField& ut, double t);

enum class Verdict { pass, fail, unchecked };
std::string to_string(Verdict v);

struct EnergyRow {
  double t = 0.0;
  std::vector<double> e;
  double E = 0.0;
  /// ||u||_{H^{-theta+1-beta* t}}, ||u_t||_{H^{-theta-beta* t}}, ||Lu||_{H^{-theta-beta* t}}.
  double norm_u = 0.0;
  double norm_ut = 0.0;
  double norm_Lu = 0.0;
  double dEdt = 0.0;
  Verdict verdict = Verdict::unchecked;
  /// sqrt(E) / (norm_u + norm_ut)
  double comparability = 0.0;
};

/// E(t) and the comparison norms of a single state (dEdt left at zero).
EnergyRow total_energy(const EnergyFunctional& ef, const SpectralField& u, const SpectralField& ut,
                       double t, const SpectralField* Lu = nullptr);

/// Sobolev norm with classical weights in L2 of the torus.
double torus_sobolev_norm(const SpectralField& u, double s);

/// Block energies along a trajectory; independent of beta.
struct EnergyTrace {
  double theta = 0.5;
  int nu_max = 0;
  std::vector<BlockEnergies> samples;
  const Trajectory* trajectory = nullptr;
};

EnergyTrace trace_energy(const EnergyFunctional& ef, const Trajectory& traj);

/// Rows for one beta: E, the norms, centered dE/dt and the per-sample verdict
/// dE/dt <= c2 sqrt(E) ||Lu|| + tolerance (interior samples only).
std::vector<EnergyRow> energy_rows(const EnergyTrace& trace, double beta, double c2);

/// Differencing tolerance at interior sample k: twice the third-difference estimate of the
/// centered-difference error plus a rounding floor.
double differencing_tolerance(const std::vector<double>& E, const std::vector<double>& times,
                              std::size_t k);

struct BetaVerdict {
  double beta = 0.0;
  double horizon = 0.0;
  std::size_t samples = 0;
  std::size_t satisfied = 0;
  double fraction = 0.0;
  bool passed = false;
  double worst_time = 0.0;
  /// Largest (dE/dt - rhs - tol) / (|rhs| + tol + |dE/dt|) over the samples.
  double worst_excess = 0.0;
  /// sqrt(E(t)) <= sqrt(E(0)) + (c2 / 2) int ||Lu|| + tolerance at every sample.
  bool gronwall_ok = false;
  std::vector<double> violation_times;
};

struct InequalityOptions {
  std::vector<double> betas{0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2};
  double c2 = 1.0;
  double required_fraction = 0.99;
  /// Each beta is checked on [0, min(T, delta log 2 / beta)] so that beta* T <= delta.
  double delta = 0.4;
};

struct InequalityReport {
  std::vector<BetaVerdict> per_beta;
  bool found = false;
  double beta = 0.0;
};

InequalityReport inequality_check(const EnergyTrace& trace, const InequalityOptions& opts);

/// c2 = margin * max over interior samples of max(dE/dt, 0) / (sqrt(E) ||Lu||), at the given beta.
double calibrate_c2(const EnergyTrace& trace, double beta, double margin = 1.1);

/// ||sum_ij d_i((a_ij - T_a_ij) d_j u)||_{H^{-s - log/2}} / ||u||_{H^{1 - s + log/2}},
/// gamma-weighted norms, coefficients frozen at time t.
double paraproduct_defect_ratio(const CoefficientField& a, const ParamCutoff& cutoff,
                                const SpectralField& u, double s, double t);

struct CommutatorReport {
  int nu = 0;
  /// ||sum_ij d_i [Delta_nu, T_a_ij] d_j u||, L2 of the torus.
  double norm = 0.0;
  /// ||grad sum_{|k - nu| <= 2} Delta_k u||
  double gradient_norm = 0.0;
  double ratio = 0.0;
  double ratio_per_log = 0.0;  // ratio / (nu + 1)
  /// Largest coefficient of [Delta_nu, S_{k-3} a] Delta_k over |k - nu| >= 3 (exact zero).
  double far_piece_max = 0.0;
  /// Largest coefficient of [Delta_nu, S_mu a] S_{mu+2}; -1 when nu < mu + 5.
  double low_piece_max = -1.0;
  /// Relative gap between the piecewise sum and the paraproduct evaluation.
  double decomposition_defect = 0.0;
};

CommutatorReport commutator_probe(const CoefficientField& a, const SpectralField& u, int nu,
                                  const ParamCutoff& cutoff, double t = 0.0);

struct CommutatorSweep {
  std::vector<CommutatorReport> rings;
  /// Slope of log(ratio / (nu + 1)) against log 2^nu.
  double slope = 0.0;
};

CommutatorSweep commutator_sweep(const CoefficientField& a, const SpectralField& u,
                                 const std::vector<int>& nus, const ParamCutoff& cutoff,
                                 double t = 0.0);

struct LossReport {
  std::vector<double> betas;
  /// sup_t N(t; beta*) / N(0) per admissible grid value (NaN when inadmissible).
  std::vector<double> sup_ratio;
  /// margin * sup of N(t; 0) / N(0) over the fit window.
  double constant = 2.0;
  double fit_time = 0.0;
  bool found = false;
  double beta_star = 0.0;
  bool at_floor = false;
};

/// N(t; b) = ||u(t)||_{H^{-theta+1-bt}} + ||u_t(t)||_{H^{-theta-bt}}; smallest b on the grid with
/// sup_t N(t; b) <= C N(0), where C is margin times the largest N(t; 0) / N(0) over the first
/// fit_fraction of the horizon. Grid values with theta + b T >= 1 are skipped.
LossReport loss_meter(const Trajectory& traj, double theta, std::vector<double> beta_grid,
                      double margin = 2.0, double fit_fraction = 0.1);

/// CSV with columns t, e_0..e_{nu_max}, E, norm_u, norm_ut, norm_Lu, dEdt, verdict.
void write_energy_csv(std::ostream& out, const std::vector<EnergyRow>& rows, int nu_max);
std::vector<EnergyRow> read_energy_csv(std::istream& in);

}  // namespace lpwave
