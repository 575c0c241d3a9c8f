#include "lpwave/energy.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "lpwave/errors.hpp"
#include "lpwave/spaces.hpp"
#include "lpwave/stats.hpp"

namespace lpwave {

double EnergyConfig::beta_star() const { return beta / std::numbers::ln2; }

void EnergyConfig::validate() const {
  if (!(theta > 0.0 && theta < 1.0)) throw ConfigurationError("theta must lie in (0, 1)");
  if (!(beta > 0.0)) throw ConfigurationError("beta must be positive");
  if (!(horizon > 0.0)) throw ConfigurationError("horizon must be positive");
  if (!(gamma >= 1.0)) throw ConfigurationError("gamma must be >= 1");
  if (!(theta + beta_star() * horizon < 1.0))
    throw ConfigurationError("theta + beta* T must stay below 1");
}

int default_nu_max(const TorusGrid& grid) {
  const double band = grid.points_per_axis() / 3.0;
  int j = 0;
  while (std::ldexp(1.0, j) < band) ++j;
  return j;
}

EnergyFunctional::EnergyFunctional(const CoefficientField& a, const EnergyConfig& cfg,
                                   const TorusGrid& grid, CutoffSystem cs)
    : a_(a),
      cfg_(cfg),
      nu_max_(cfg.nu_max < 0 ? default_nu_max(grid) : cfg.nu_max),
      cutoff_(grid, cfg.mu, cfg.gamma, std::move(cs)) {
  cfg_.validate();
  if (a.dim() != grid.dim()) throw DimensionError("coefficient and grid dimensions differ");
  if (a.epsilon() > 0.0) throw DomainError("energy needs the unmollified coefficient");
  cfg_.nu_max = nu_max_;
  mollified_.reserve(static_cast<std::size_t>(nu_max_ + 1));
  for (int nu = 0; nu <= nu_max_; ++nu) mollified_.push_back(smooth_in_time(a, std::ldexp(1.0, -nu)));
  if (cfg_.horizon > mollified_.front().t_end() || mollified_.front().t_begin() > 0.0)
    throw ConfigurationError("horizon leaves the mollified coefficient window");
}

const CoefficientField& EnergyFunctional::mollified(int nu) const {
  if (nu < 0 || nu > nu_max_) throw DomainError("block index outside 0..nu_max");
  return mollified_[static_cast<std::size_t>(nu)];
}

void EnergyFunctional::set_threads(int threads) {
  if (threads < 1) throw ConfigurationError("thread count must be >= 1");
  threads_ = threads;
}

namespace {

double squared(double x) { return x * x; }

bool all_zero(const SpectralField& u) {
  for (const auto& c : u.coefficients())
    if (c != 0.0) return false;
  return true;
}

// a * b restricted to the lattice of the grid, products taken on a twice finer grid.
SpectralField product_on_lattice(const SpectralField& a, const SpectralField& b) {
  const auto& g = a.grid();
  const TorusGrid fine(g.dim(), 2 * g.points_per_axis());
  std::vector<Complex> ac(fine.size()), bc(fine.size());
  const auto ah = a.coefficients(), bh = b.coefficients();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto j = *fine.index_of(g.frequency(i));
    ac[j] = ah[i];
    bc[j] = bh[i];
  }
  std::vector<Complex> av(fine.size()), bv(fine.size());
  fine.inverse(ac, av);
  fine.inverse(bc, bv);
  for (std::size_t p = 0; p < fine.size(); ++p) av[p] *= bv[p];
  fine.forward(av, ac);
  std::vector<Complex> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = ac[*fine.index_of(g.frequency(i))];
  return SpectralField::from_coefficients(g, std::move(out));
}

double max_abs_coefficient(const SpectralField& u) {
  double m = 0.0;
  for (const auto& c : u.coefficients()) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

TaramaComponents tarama_components(const EnergyFunctional& ef, const SpectralField& u,
                                   const SpectralField& ut, int nu, double t) {
  const auto& cs = ef.cutoff_system();
  const auto u_nu = block(cs, u, nu);
  const auto ut_nu = block(cs, ut, nu);
  if (all_zero(u_nu) && all_zero(ut_nu)) return {u_nu, u_nu, u_nu};
  const AlphaSymbol alpha(ef.mollified(nu), ef.config().gamma, t, ef.grid());
  const auto& cut = ef.cutoff();
  const auto v = apply_parad(cut, alpha.power(-0.5), ut_nu) -
                 apply_parad(cut, alpha.dt_inverse_sqrt(), u_nu);
  const auto w = apply_parad(cut, alpha.half_lambda(), u_nu);
  return {v, w, u_nu};
}

double block_energy(const SpectralField& v, const SpectralField& w, const SpectralField& z) {
  return squared(l2_norm(v)) + squared(l2_norm(w)) + squared(l2_norm(z));
}

double energy_weight(double beta, double theta, int nu, double t) {
  return std::exp(-2.0 * beta * (nu + 1) * t) * std::exp2(-2.0 * nu * theta);
}

double weighted_energy(const std::vector<double>& e, double beta, double theta, double t) {
  double s = 0.0;
  for (std::size_t nu = 0; nu < e.size(); ++nu)
    s += energy_weight(beta, theta, static_cast<int>(nu), t) * e[nu];
  return s;
}

BlockEnergies block_energies(const EnergyFunctional& ef, const SpectralField& u,
                             const SpectralField& ut, double t) {
  if (!(u.grid() == ef.grid()) || !(ut.grid() == ef.grid()))
    throw DimensionError("state and energy grid differ");
  BlockEnergies out;
  out.t = t;
  const int n = ef.nu_max() + 1;
  out.e.assign(static_cast<std::size_t>(n), 0.0);
  auto work = [&](int nu) {
    const auto c = tarama_components(ef, u, ut, nu, t);
    out.e[static_cast<std::size_t>(nu)] = block_energy(c.v, c.w, c.z);
  };
  const int threads = std::min(ef.threads(), n);
  if (threads <= 1) {
    for (int nu = 0; nu < n; ++nu) work(nu);
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int nu = w; nu < n; nu += threads) work(nu);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  const double total = l2_norm(u);
  const double tail = l2_norm(u - low_pass(ef.cutoff_system(), u, ef.nu_max()));
  out.tail_fraction = total > 0.0 ? tail / total : 0.0;
  out.truncation_warning = out.tail_fraction > 0.01;
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::unchecked: break;
  }
  return "unchecked";
}

double torus_sobolev_norm(const SpectralField& u, double s) {
  return std::sqrt(u.grid().volume()) * sobolev_norm(u, NormSpec{s, 0.0, 0.0});
}

EnergyRow total_energy(const EnergyFunctional& ef, const SpectralField& u, const SpectralField& ut,
                       double t, const SpectralField* Lu) {
  const auto& cfg = ef.config();
  if (t > cfg.horizon * (1.0 + 1e-12)) throw DomainError("time beyond the energy horizon");
  const auto be = block_energies(ef, u, ut, t);
  EnergyRow row;
  row.t = t;
  row.e = be.e;
  row.E = weighted_energy(be.e, cfg.beta, cfg.theta, t);
  const double bs = cfg.beta_star() * t;
  row.norm_u = torus_sobolev_norm(u, -cfg.theta + 1.0 - bs);
  row.norm_ut = torus_sobolev_norm(ut, -cfg.theta - bs);
  if (Lu) row.norm_Lu = torus_sobolev_norm(*Lu, -cfg.theta - bs);
  const double d = row.norm_u + row.norm_ut;
  row.comparability = d > 0.0 ? std::sqrt(row.E) / d : 0.0;
  return row;
}

EnergyTrace trace_energy(const EnergyFunctional& ef, const Trajectory& traj) {
  EnergyTrace tr;
  tr.theta = ef.config().theta;
  tr.nu_max = ef.nu_max();
  tr.trajectory = &traj;
  tr.samples.reserve(traj.times.size());
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    tr.samples.push_back(block_energies(ef, traj.u[k], traj.ut[k], traj.times[k]));
  return tr;
}

double differencing_tolerance(const std::vector<double>& E, const std::vector<double>& times,
                              std::size_t k) {
  const std::size_t n = E.size();
  if (n < 2) return 0.0;
  const double h = (times.back() - times.front()) / static_cast<double>(n - 1);
  const double floor = 1e-13 * std::abs(E[k]) / h;
  if (n < 5) return floor;
  const std::size_t c = std::clamp<std::size_t>(k, 2, n - 3);
  const double third = (E[c + 2] - 2.0 * E[c + 1] + 2.0 * E[c - 1] - E[c - 2]) / (2.0 * h * h * h);
  return 2.0 * h * h / 6.0 * std::abs(third) + floor;
}

std::vector<EnergyRow> energy_rows(const EnergyTrace& trace, double beta, double c2) {
  if (!trace.trajectory) throw ConfigurationError("energy trace has no trajectory");
  const auto& traj = *trace.trajectory;
  const std::size_t n = trace.samples.size();
  const double bstar = beta / std::numbers::ln2;
  std::vector<EnergyRow> rows(n);
  std::vector<double> E(n), times(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto& r = rows[k];
    const auto& s = trace.samples[k];
    r.t = s.t;
    r.e = s.e;
    r.E = weighted_energy(s.e, beta, trace.theta, s.t);
    r.norm_u = torus_sobolev_norm(traj.u[k], -trace.theta + 1.0 - bstar * s.t);
    r.norm_ut = torus_sobolev_norm(traj.ut[k], -trace.theta - bstar * s.t);
    r.norm_Lu = torus_sobolev_norm(traj.residual[k], -trace.theta - bstar * s.t);
    const double d = r.norm_u + r.norm_ut;
    r.comparability = d > 0.0 ? std::sqrt(r.E) / d : 0.0;
    E[k] = r.E;
    times[k] = s.t;
  }
  for (std::size_t k = 0; k < n && n >= 3; ++k) {
    auto& r = rows[k];
    if (k == 0) {
      r.dEdt = (-3.0 * E[0] + 4.0 * E[1] - E[2]) / (times[2] - times[0]);
    } else if (k + 1 == n) {
      r.dEdt = (3.0 * E[k] - 4.0 * E[k - 1] + E[k - 2]) / (times[k] - times[k - 2]);
    } else {
      r.dEdt = (E[k + 1] - E[k - 1]) / (times[k + 1] - times[k - 1]);
      const double rhs = c2 * std::sqrt(r.E) * r.norm_Lu;
      r.verdict = r.dEdt <= rhs + differencing_tolerance(E, times, k) ? Verdict::pass : Verdict::fail;
    }
  }
  return rows;
}

InequalityReport inequality_check(const EnergyTrace& trace, const InequalityOptions& opts) {
  if (opts.betas.empty()) throw ConfigurationError("beta sweep is empty");
  if (!trace.trajectory || trace.samples.size() < 3)
    throw ConfigurationError("inequality check needs at least three snapshots");
  auto betas = opts.betas;
  std::sort(betas.begin(), betas.end());
  InequalityReport rep;
  const double t_last = trace.samples.back().t;
  for (double beta : betas) {
    BetaVerdict bv;
    bv.beta = beta;
    bv.horizon = std::min(t_last, opts.delta * std::numbers::ln2 / beta);
    const auto rows = energy_rows(trace, beta, opts.c2);
    std::vector<double> E(rows.size()), times(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      E[k] = rows[k].E;
      times[k] = rows[k].t;
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
      if (rows[k].t > bv.horizon) break;
      ++bv.samples;
      const double tol = differencing_tolerance(E, times, k);
      const double rhs = opts.c2 * std::sqrt(rows[k].E) * rows[k].norm_Lu;
      const double excess = (rows[k].dEdt - rhs - tol) / (std::abs(rhs) + tol + std::abs(rows[k].dEdt) + 1e-300);
      if (excess > worst) {
        worst = excess;
        bv.worst_time = rows[k].t;
      }
      if (rows[k].verdict == Verdict::pass) {
        ++bv.satisfied;
      } else {
        bv.violation_times.push_back(rows[k].t);
      }
    }
    bv.worst_excess = bv.samples ? worst : 0.0;
    bv.fraction = bv.samples ? static_cast<double>(bv.satisfied) / static_cast<double>(bv.samples) : 0.0;
    bv.passed = bv.samples > 0 && bv.fraction >= opts.required_fraction;
    // integrated form: sqrt E(t) - sqrt E(0) <= (c2 / 2) int ||Lu|| + differencing slack
    bv.gronwall_ok = true;
    const double root0 = std::sqrt(E[0]);
    double bound = root0;
    for (std::size_t k = 1; k < rows.size() && rows[k].t <= bv.horizon; ++k) {
      const double h = times[k] - times[k - 1];
      const double tol_k = differencing_tolerance(E, times, k);
      const double tol_p = differencing_tolerance(E, times, k - 1);
      const double root_min = std::max(std::sqrt(std::min(E[k], E[k - 1])), 1e-300);
      bound += h * (0.25 * opts.c2 * (rows[k].norm_Lu + rows[k - 1].norm_Lu) +
                    0.25 * (tol_k + tol_p) / root_min);
      if (std::sqrt(E[k]) > bound + 1e-9 * root0) bv.gronwall_ok = false;
    }
    if (bv.passed && !rep.found) {
      rep.found = true;
      rep.beta = beta;
    }
    rep.per_beta.push_back(std::move(bv));
  }
  return rep;
}

double calibrate_c2(const EnergyTrace& trace, double beta, double margin) {
  const auto rows = energy_rows(trace, beta, 0.0);
  double c = 0.0;
  for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
    const double denom = std::sqrt(rows[k].E) * rows[k].norm_Lu;
    if (denom > 0.0) c = std::max(c, std::max(rows[k].dEdt, 0.0) / denom);
  }
  return margin * c;
}

double paraproduct_defect_ratio(const CoefficientField& a, const ParamCutoff& cutoff,
                                const SpectralField& u, double s, double t) {
  const auto& g = u.grid();
  if (a.dim() != g.dim()) throw DimensionError("coefficient and field dimensions differ");
  auto total = SpectralField::zero(g);
  for (int i = 0; i < g.dim(); ++i) {
    for (int j = 0; j < g.dim(); ++j) {
      auto samples = a.sample(i, j, t, g);
      const auto a_field = SpectralField::from_real_values(g, samples);
      const auto w = derivative(u, j);
      const auto defect =
          product_on_lattice(a_field, w) - apply_parad(cutoff, function_symbol(std::move(samples)), w);
      total = total + derivative(defect, i);
    }
  }
  const double gamma = cutoff.gamma();
  const double num = sobolev_norm(total, NormSpec{-s, -0.5, gamma});
  const double den = sobolev_norm(u, NormSpec{1.0 - s, 0.5, gamma});
  return den > 0.0 ? num / den : 0.0;
}

CommutatorReport commutator_probe(const CoefficientField& a, const SpectralField& u, int nu,
                                  const ParamCutoff& cutoff, double t) {
  const auto& g = u.grid();
  if (a.dim() != g.dim()) throw DimensionError("coefficient and field dimensions differ");
  if (nu < 0) throw DomainError("block index must be >= 0");
  const auto& cs = cutoff.cutoff_system();
  const int mu = cutoff.mu();
  const int top = top_block_index(g);
  CommutatorReport rep;
  rep.nu = nu;
  rep.low_piece_max = nu >= mu + 5 ? 0.0 : -1.0;
  auto total = SpectralField::zero(g);
  for (int i = 0; i < g.dim(); ++i) {
    for (int j = 0; j < g.dim(); ++j) {
      auto samples = a.sample(i, j, t, g);
      const auto a_field = SpectralField::from_real_values(g, samples);
      const auto sym = function_symbol(std::move(samples));
      const auto w = derivative(u, j);
      const auto w_nu = block(cs, w, nu);
      const auto comm = block(cs, apply_parad(cutoff, sym, w), nu) - apply_parad(cutoff, sym, w_nu);
      total = total + derivative(comm, i);

      // [Delta_nu, S_mu a] S_{mu+2} w + sum_k [Delta_nu, S_{k-3} a] Delta_k w
      const auto low_a = low_pass(cs, a_field, mu);
      auto pieces = block(cs, product_on_lattice(low_a, low_pass(cs, w, mu + 2)), nu) -
                    product_on_lattice(low_a, low_pass(cs, w_nu, mu + 2));
      if (nu >= mu + 5) rep.low_piece_max = std::max(rep.low_piece_max, max_abs_coefficient(pieces));
      for (int k = mu + 3; k <= top; ++k) {
        const auto ak = low_pass(cs, a_field, k - 3);
        const auto piece = block(cs, product_on_lattice(ak, block(cs, w, k)), nu) -
                           product_on_lattice(ak, block(cs, w_nu, k));
        if (std::abs(k - nu) >= 3) rep.far_piece_max = std::max(rep.far_piece_max, max_abs_coefficient(piece));
        pieces = pieces + piece;
      }
      const double cn = coefficient_norm(comm);
      const double gap = coefficient_norm(pieces - comm);
      rep.decomposition_defect =
          std::max(rep.decomposition_defect, cn > 0.0 ? gap / cn : gap);
    }
  }
  rep.norm = l2_norm(total);
  auto hood = SpectralField::zero(g);
  for (int k = std::max(0, nu - 2); k <= nu + 2; ++k) hood = hood + block(cs, u, k);
  double grad2 = 0.0;
  for (int j = 0; j < g.dim(); ++j) grad2 += squared(l2_norm(derivative(hood, j)));
  rep.gradient_norm = std::sqrt(grad2);
  rep.ratio = rep.gradient_norm > 0.0 ? rep.norm / rep.gradient_norm : 0.0;
  rep.ratio_per_log = rep.ratio / (nu + 1);
  return rep;
}

CommutatorSweep commutator_sweep(const CoefficientField& a, const SpectralField& u,
                                 const std::vector<int>& nus, const ParamCutoff& cutoff, double t) {
  CommutatorSweep sw;
  std::vector<double> x, y;
  for (int nu : nus) {
    sw.rings.push_back(commutator_probe(a, u, nu, cutoff, t));
    if (sw.rings.back().ratio_per_log > 0.0) {
      x.push_back(std::ldexp(1.0, nu));
      y.push_back(sw.rings.back().ratio_per_log);
    }
  }
  if (x.size() >= 2) sw.slope = log_log_slope(x, y);
  return sw;
}

LossReport loss_meter(const Trajectory& traj, double theta, std::vector<double> beta_grid,
                      double margin, double fit_fraction) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
  if (beta_grid.empty() || traj.times.empty()) throw DomainError("loss meter needs data");
  std::sort(beta_grid.begin(), beta_grid.end());
  LossReport rep;
  rep.betas = beta_grid;
  if (!(margin >= 1.0) || !(fit_fraction >= 0.0 && fit_fraction <= 1.0))
    throw DomainError("loss meter needs margin >= 1 and fit fraction in [0, 1]");
  const double T = traj.times.back();
  auto N = [&](std::size_t k, double b) {
    const double t = traj.times[k];
    return torus_sobolev_norm(traj.u[k], -theta + 1.0 - b * t) +
           torus_sobolev_norm(traj.ut[k], -theta - b * t);
  };
  const double data = N(0, 0.0);
  if (!(data > 0.0)) throw DomainError("loss meter needs nonzero data");
  rep.fit_time = fit_fraction * T;
  double fit = 1.0;
  for (std::size_t k = 0; k < traj.times.size() && traj.times[k] <= rep.fit_time; ++k)
    fit = std::max(fit, N(k, 0.0) / data);
  rep.constant = margin * fit;
  bool admissible = false;
  for (double b : beta_grid) {
    if (!(theta + b * T < 1.0)) {
      rep.sup_ratio.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    admissible = true;
    double sup = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) sup = std::max(sup, N(k, b) / data);
    rep.sup_ratio.push_back(sup);
    if (!rep.found && sup <= rep.constant) {
      rep.found = true;
      rep.beta_star = b;
      rep.at_floor = b == beta_grid.front();
    }
  }
  if (!admissible) throw DomainError("no grid value satisfies theta + beta* T < 1");
  return rep;
}

void write_energy_csv(std::ostream& out, const std::vector<EnergyRow>& rows, int nu_max) {
  out << "t";
  for (int nu = 0; nu <= nu_max; ++nu) out << ",e_" << nu;
  out << ",E,norm_u,norm_ut,norm_Lu,dEdt,verdict\n";
  char buf[40];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (const auto& r : rows) {
    if (r.e.size() != static_cast<std::size_t>(nu_max + 1))
      throw DimensionError("energy row has the wrong number of blocks");
    num(r.t);
    for (double e : r.e) {
      out << ',';
      num(e);
    }
    for (double v : {r.E, r.norm_u, r.norm_ut, r.norm_Lu, r.dEdt}) {
      out << ',';
      num(v);
    }
    out << ',' << to_string(r.verdict) << '\n';
  }
}

std::vector<EnergyRow> read_energy_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("header", "empty energy CSV");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  const std::vector<std::string> tail{"E", "norm_u", "norm_ut", "norm_Lu", "dEdt", "verdict"};
  if (header.size() < tail.size() + 2 || header.front() != "t")
    throw SchemaError("header", "missing columns");
  const std::size_t blocks = header.size() - tail.size() - 1;
  for (std::size_t nu = 0; nu < blocks; ++nu)
    if (header[1 + nu] != "e_" + std::to_string(nu))
      throw SchemaError("header", "expected column e_" + std::to_string(nu));
  for (std::size_t i = 0; i < tail.size(); ++i)
    if (header[1 + blocks + i] != tail[i]) throw SchemaError("header", "expected column " + tail[i]);
  std::vector<EnergyRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size())
      throw SchemaError("line " + std::to_string(line_no), "wrong number of cells");
    EnergyRow r;
    try {
      r.t = std::stod(cells[0]);
      for (std::size_t nu = 0; nu < blocks; ++nu) r.e.push_back(std::stod(cells[1 + nu]));
      r.E = std::stod(cells[1 + blocks]);
      r.norm_u = std::stod(cells[2 + blocks]);
      r.norm_ut = std::stod(cells[3 + blocks]);
      r.norm_Lu = std::stod(cells[4 + blocks]);
      r.dEdt = std::stod(cells[5 + blocks]);
    } catch (const std::exception&) {
      throw SchemaError("line " + std::to_string(line_no), "unparsable number");
    }
    const auto& v = cells.back();
    if (v == "pass") r.verdict = Verdict::pass;
    else if (v == "fail") r.verdict = Verdict::fail;
    else if (v == "unchecked") r.verdict = Verdict::unchecked;
    else throw SchemaError("line " + std::to_string(line_no) + ".verdict", "unknown verdict " + v);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace lpwave
