#include "lpwave/parad.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "lpwave/errors.hpp"
#include "lpwave/spaces.hpp"
#include "lpwave/stats.hpp"

namespace lpwave {

namespace {

double norm_of(const Frequency& k) {
  return std::sqrt(static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1]);
}

std::vector<Complex> forward_of(const TorusGrid& grid, std::span<const Complex> values) {
  std::vector<Complex> c(grid.size());
  grid.forward(values, c);
  return c;
}

}  // namespace

struct ParamCutoff::Rows {
  explicit Rows(std::size_t n) : once(n), rows(n) {}
  std::vector<std::once_flag> once;
  std::vector<std::vector<Entry>> rows;
};

ParamCutoff::ParamCutoff(const TorusGrid& grid, int mu, double gamma, CutoffSystem cs)
    : grid_(grid), mu_(mu), gamma_(gamma), cs_(std::move(cs)) {
  if (mu < -2) throw ConfigurationError("cutoff start index mu must be >= -2");
  if (!(gamma >= 1.0)) throw ConfigurationError("cutoff parameter gamma must be >= 1");
  if (std::ldexp(1.0, mu + 3) > grid.nyquist())
    throw ConfigurationError("cutoff needs 2^(mu+3) <= M/2; mu = " + std::to_string(mu) +
                             " is too large for M = " + std::to_string(grid.points_per_axis()));
  rows_ = std::make_shared<Rows>(grid.size());
  const double rmax = grid.nyquist() * std::sqrt(static_cast<double>(grid.dim()));
  eps1_ = 1.0;
  eps2_ = 0.0;
  for (double r = 0.0; r <= rmax; r += 0.25) {
    eps1_ = std::min(eps1_, unit_radius(r) / (gamma_ + r));
    eps2_ = std::max(eps2_, support_radius(r) / (gamma_ + r));
  }
}

double ParamCutoff::psi(double e, double x) const {
  double v = cs_.chi(std::ldexp(e, -mu_)) * cs_.chi(std::ldexp(x, -mu_ - 2));
  if (x > 0.0) {
    // phi(2^-k x) vanishes unless 2^(k-1) < x < 2^(k+1)
    const int top = static_cast<int>(std::floor(std::log2(x))) + 1;
    for (int k = std::max(mu_ + 3, top - 2); k <= top; ++k)
      v += cs_.chi(std::ldexp(e, 3 - k)) * cs_.phi(std::ldexp(x, -k));
  }
  return v;
}

double ParamCutoff::psi_dxi(double e, double x) const {
  double v = cs_.chi(std::ldexp(e, -mu_)) * std::ldexp(cs_.chi_derivative(std::ldexp(x, -mu_ - 2)), -mu_ - 2);
  if (x > 0.0) {
    const int top = static_cast<int>(std::floor(std::log2(x))) + 1;
    for (int k = std::max(mu_ + 3, top - 2); k <= top; ++k) {
      const double r = std::ldexp(x, -k);
      const double dphi = cs_.chi_derivative(r) - 2.0 * cs_.chi_derivative(2.0 * r);
      v += cs_.chi(std::ldexp(e, 3 - k)) * std::ldexp(dphi, -k);
    }
  }
  return v;
}

double ParamCutoff::support_radius(double x) const {
  // psi is nonincreasing in |eta|; bracket then bisect
  double lo = 0.0, hi = 2.0 * std::max(std::ldexp(1.0, mu_ + 1), x) + 1.0;
  if (psi(lo, x) <= 0.0) return 0.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (psi(mid, x) > 0.0 ? lo : hi) = mid;
  }
  return lo;
}

double ParamCutoff::unit_radius(double x) const {
  double lo = 0.0, hi = 2.0 * std::max(std::ldexp(1.0, mu_ + 1), x) + 1.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (psi(mid, x) >= 1.0 ? lo : hi) = mid;
  }
  return lo;
}

const std::vector<ParamCutoff::Entry>& ParamCutoff::row(std::size_t xi_flat) const {
  std::call_once(rows_->once[xi_flat], [this, xi_flat] {
    auto& out = rows_->rows[xi_flat];
    const double x = grid_.frequency_norm(xi_flat);
    const int r = std::min(static_cast<int>(std::floor(support_radius(x))), grid_.nyquist() - 1);
    const int r1 = grid_.dim() == 2 ? r : 0;
    for (int e0 = -r; e0 <= r; ++e0) {
      for (int e1 = -r1; e1 <= r1; ++e1) {
        const Frequency eta{e0, e1};
        const double p = psi(norm_of(eta), x);
        if (p > 0.0) out.push_back({eta, p});
      }
    }
  });
  return rows_->rows[xi_flat];
}

ParamCutoff make_cutoff(int mu, double gamma, const TorusGrid& grid) {
  return ParamCutoff(grid, mu, gamma);
}

ParamCutoff cutoff_for_gamma(double gamma, const TorusGrid& grid) {
  const double g = std::log2(gamma);
  if (!(gamma >= 1.0) || g != std::floor(g))
    throw ConfigurationError("gamma must be a power of two >= 1");
  return ParamCutoff(grid, static_cast<int>(g) - 2, gamma);
}

// ---------------------------------------------------------------------------

std::vector<Complex> ParamSymbol::values(const TorusGrid& grid, const Frequency& xi) const {
  std::vector<Complex> out(grid.size());
  if (x_independent) {
    std::fill(out.begin(), out.end(), multiplier(xi));
  } else {
    if (!column) throw ConfigurationError("symbol has no column evaluator");
    column(xi, out);
  }
  return out;
}

ParamSymbol multiplier_symbol(double order, std::function<Complex(const Frequency&)> m) {
  ParamSymbol s;
  s.order = order;
  s.x_independent = true;
  s.multiplier = std::move(m);
  return s;
}

ParamSymbol lambda_symbol(double gamma, double power) {
  return multiplier_symbol(power, [gamma, power](const Frequency& k) {
    return Complex(std::pow(std::hypot(gamma, norm_of(k)), power));
  });
}

ParamSymbol function_symbol(std::vector<double> samples) {
  ParamSymbol s;
  auto data = std::make_shared<const std::vector<double>>(std::move(samples));
  s.xi_independent = true;
  s.column = [data](const Frequency&, std::span<Complex> out) {
    if (out.size() != data->size()) throw DimensionError("symbol samples do not match the grid");
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = (*data)[p];
  };
  return s;
}

ParamSymbol product(const ParamSymbol& a, const ParamSymbol& b) {
  if (a.x_independent && b.x_independent) {
    auto s = multiplier_symbol(a.order + b.order, [a, b](const Frequency& k) {
      return a.multiplier(k) * b.multiplier(k);
    });
    s.log_order = a.log_order + b.log_order;
    return s;
  }
  ParamSymbol s;
  s.order = a.order + b.order;
  s.log_order = a.log_order + b.log_order;
  s.column = [a, b](const Frequency& k, std::span<Complex> out) {
    if (a.x_independent) {
      b.column(k, out);
      const Complex c = a.multiplier(k);
      for (auto& v : out) v = c * v;
    } else if (b.x_independent) {
      a.column(k, out);
      const Complex c = b.multiplier(k);
      for (auto& v : out) v *= c;
    } else {
      std::vector<Complex> tmp(out.size());
      a.column(k, out);
      b.column(k, tmp);
      for (std::size_t p = 0; p < out.size(); ++p) out[p] *= tmp[p];
    }
  };
  return s;
}

ParamSymbol conjugate(const ParamSymbol& a) {
  ParamSymbol s = a;
  if (a.x_independent) {
    s.multiplier = [a](const Frequency& k) { return std::conj(a.multiplier(k)); };
  } else {
    s.column = [a](const Frequency& k, std::span<Complex> out) {
      a.column(k, out);
      for (auto& v : out) v = std::conj(v);
    };
  }
  return s;
}

ParamSymbol scaled(const ParamSymbol& a, Complex c) {
  ParamSymbol s = a;
  if (a.x_independent) {
    s.multiplier = [a, c](const Frequency& k) { return c * a.multiplier(k); };
  } else {
    s.column = [a, c](const Frequency& k, std::span<Complex> out) {
      a.column(k, out);
      for (auto& v : out) v *= c;
    };
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

void require_cutoff_grid(const ParamCutoff& cutoff, const SpectralField& u) {
  if (!(cutoff.grid() == u.grid())) throw DimensionError("cutoff and field live on different grids");
}

}  // namespace

SpectralField apply_parad(const ParamCutoff& cutoff, const ParamSymbol& a, const SpectralField& u,
                          ParadStats* stats) {
  require_cutoff_grid(cutoff, u);
  const auto& g = u.grid();
  const auto uh = u.coefficients();
  std::vector<Complex> out(g.size());
  std::vector<Complex> col(g.size()), ah(g.size());
  ParadStats local;
  bool have_column = false;
  for (std::size_t i = 0; i < uh.size(); ++i) {
    if (uh[i] == 0.0) continue;
    const Frequency xi = g.frequency(i);
    if (a.x_independent) {
      // a^ is a unit mass at eta = 0 and psi(0, xi) = 1
      out[i] += a.multiplier(xi) * uh[i];
      ++local.pairs;
      continue;
    }
    if (!(a.xi_independent && have_column)) {
      a.column(xi, col);
      g.forward(col, ah);
      have_column = true;
    }
    const double scale = cutoff.gamma() + g.frequency_norm(i);
    for (const auto& e : cutoff.row(i)) {
      const auto ei = g.index_of(e.eta);
      if (!ei) continue;
      const Complex c = e.psi * ah[*ei] * uh[i];
      const auto zi = g.index_of({xi[0] + e.eta[0], xi[1] + e.eta[1]});
      if (!zi) {
        local.aliasing_mass += std::norm(c);
        continue;
      }
      out[*zi] += c;
      ++local.pairs;
      local.max_support_ratio = std::max(local.max_support_ratio, norm_of(e.eta) / scale);
    }
  }
  if (stats) *stats = local;
  return SpectralField::from_coefficients(g, std::move(out), Parity::complex);
}

SpectralField apply_parad_adjoint(const ParamCutoff& cutoff, const ParamSymbol& a,
                                  const SpectralField& u) {
  require_cutoff_grid(cutoff, u);
  const auto& g = u.grid();
  const auto vh = u.coefficients();
  std::vector<Complex> out(g.size());
  std::vector<Complex> col(g.size()), ah(g.size());
  bool have_column = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Frequency xi = g.frequency(i);
    if (a.x_independent) {
      out[i] = std::conj(a.multiplier(xi)) * vh[i];
      continue;
    }
    // entries of row xi reaching a nonzero coefficient of u
    const auto& row = cutoff.row(i);
    bool touches = false;
    for (const auto& e : row) {
      const auto zi = g.index_of({xi[0] + e.eta[0], xi[1] + e.eta[1]});
      if (zi && vh[*zi] != 0.0) {
        touches = true;
        break;
      }
    }
    if (!touches) continue;
    if (!(a.xi_independent && have_column)) {
      a.column(xi, col);
      g.forward(col, ah);
      have_column = true;
    }
    Complex sum = 0.0;
    for (const auto& e : row) {
      const auto ei = g.index_of(e.eta);
      const auto zi = g.index_of({xi[0] + e.eta[0], xi[1] + e.eta[1]});
      if (!ei || !zi) continue;
      sum += std::conj(e.psi * ah[*ei]) * vh[*zi];
    }
    out[i] = sum;
  }
  return SpectralField::from_coefficients(g, std::move(out), Parity::complex);
}

std::vector<Complex> classical_symbol(const ParamCutoff& cutoff, const ParamSymbol& a,
                                      const Frequency& xi) {
  const auto& g = cutoff.grid();
  const auto i = g.index_of(xi);
  if (!i) throw DomainError("frequency outside the lattice");
  if (a.x_independent) return std::vector<Complex>(g.size(), a.multiplier(xi));
  const auto col = a.values(g, xi);
  const auto ah = forward_of(g, col);
  std::vector<Complex> sh(g.size());
  for (const auto& e : cutoff.row(*i)) {
    const auto ei = g.index_of(e.eta);
    if (ei) sh[*ei] = e.psi * ah[*ei];
  }
  std::vector<Complex> out(g.size());
  g.inverse(sh, out);
  return out;
}

// ---------------------------------------------------------------------------

KernelReport kernel_bounds_probe(const ParamCutoff& cutoff, const std::vector<int>& xi_samples,
                                 int oversampling) {
  const auto& base = cutoff.grid();
  if (oversampling < 1) throw DomainError("oversampling factor must be >= 1");
  const TorusGrid fine(base.dim(), base.points_per_axis() * oversampling);
  const double gamma = cutoff.gamma();
  // periodic weight |x| log(2 + 1/|x|) on the fine grid
  std::vector<double> weight(fine.size());
  std::vector<bool> boundary(fine.size());
  for (std::size_t p = 0; p < fine.size(); ++p) {
    auto x = fine.point(p);
    double r2 = 0.0, linf = 0.0;
    for (int a = 0; a < fine.dim(); ++a) {
      const double d = std::min(x[a], 2.0 * std::numbers::pi - x[a]);
      r2 += d * d;
      linf = std::max(linf, d);
    }
    const double r = std::sqrt(r2);
    weight[p] = r > 0.0 ? r * std::log(2.0 + 1.0 / r) : 0.0;
    boundary[p] = linf >= 0.9 * std::numbers::pi;
  }
  KernelReport rep;
  rep.gamma = gamma;
  rep.mu = cutoff.mu();
  std::vector<Complex> coeff(fine.size()), values(fine.size());
  for (int n : xi_samples) {
    if (n < 0 || n >= base.nyquist()) throw DomainError("kernel sample outside the lattice");
    KernelSample s;
    s.xi = n;
    const double xn = n;
    const double r = std::ceil(cutoff.support_radius(xn));
    const int r0 = static_cast<int>(r);
    const int r1 = fine.dim() == 2 ? r0 : 0;
    for (int family = 0; family < 4; ++family) {
      const int alpha = family / 2, beta = family % 2;
      std::fill(coeff.begin(), coeff.end(), Complex(0.0));
      bool any = false;
      for (int e0 = -r0; e0 <= r0; ++e0) {
        for (int e1 = -r1; e1 <= r1; ++e1) {
          const auto idx = fine.index_of({e0, e1});
          if (!idx) continue;
          const double en = std::hypot(static_cast<double>(e0), static_cast<double>(e1));
          Complex c = alpha ? cutoff.psi_dxi(en, xn) : cutoff.psi(en, xn);
          if (beta) c *= Complex(0.0, e0);
          coeff[*idx] = c;
          any = any || (alpha && c != 0.0);
        }
      }
      s.structural_zero[family] = alpha && !any;
      fine.inverse(coeff, values);
      double l1 = 0.0, wl1 = 0.0, edge = 0.0;
      Complex mean = 0.0;
      for (std::size_t p = 0; p < fine.size(); ++p) {
        const double m = std::abs(values[p]);
        l1 += m;
        wl1 += m * weight[p];
        if (boundary[p]) edge += m;
        mean += values[p];
      }
      const double np = static_cast<double>(fine.size());
      s.l1[family] = l1 / np;
      s.weighted_l1[family] = wl1 / np;
      const double scale = gamma + xn;
      const double plain_bound = std::pow(scale, -alpha + beta);
      const double weighted_bound = std::pow(scale, -alpha + beta - 1) * std::log(1.0 + gamma + xn);
      s.ratio[family] = s.l1[family] / plain_bound;
      s.weighted_ratio[family] = s.weighted_l1[family] / weighted_bound;
      if (family == 1) s.moment = std::abs(mean / np);
      if (family == 0) s.boundary_mass = l1 > 0.0 ? edge / l1 : 0.0;
    }
    s.aliasing_flag = s.boundary_mass > 0.01;
    rep.samples.push_back(s);
  }
  return rep;
}

double kernel_spread(const std::vector<KernelReport>& reports, int family, bool weighted) {
  Bracket b;
  for (const auto& r : reports)
    for (const auto& s : r.samples) {
      if (s.structural_zero[family]) continue;
      b.add(weighted ? s.weighted_ratio[family] : s.ratio[family]);
    }
  return b.width();
}

// ---------------------------------------------------------------------------

AlphaSymbol::AlphaSymbol(const CoefficientField& a, double gamma, double t, const TorusGrid& grid)
    : dim_(a.dim()), gamma_(gamma) {
  if (grid.dim() != a.dim()) throw DimensionError("coefficient and grid dimensions differ");
  if (!(gamma >= 1.0)) throw DomainError("gamma must be >= 1");
  auto values = std::make_shared<std::vector<std::vector<double>>>();
  auto derivs = std::make_shared<std::vector<std::vector<double>>>();
  const int n_entries = dim_ == 1 ? 1 : 3;
  const std::array<std::array<int, 2>, 3> ij{{{0, 0}, {0, 1}, {1, 1}}};
  for (int e = 0; e < n_entries; ++e) {
    values->push_back(a.sample(ij[e][0], ij[e][1], t, grid, 0));
    derivs->push_back(a.sample(ij[e][0], ij[e][1], t, grid, 1));
  }
  // pointwise ellipticity of the sampled matrix
  double lo = a.lambda0(), hi = a.Lambda0();
  for (std::size_t p = 0; p < grid.size(); ++p) {
    double emin, emax;
    if (dim_ == 1) {
      emin = emax = (*values)[0][p];
    } else {
      const double a11 = (*values)[0][p], a12 = (*values)[1][p], a22 = (*values)[2][p];
      const double m = 0.5 * (a11 + a22), d = std::hypot(0.5 * (a11 - a22), a12);
      emin = m - d;
      emax = m + d;
    }
    if (emin <= 0.0) {
      const auto x = grid.point(p);
      throw EllipticityError("sampled coefficient not positive definite", t, x[0], x[1], 1.0, 0.0);
    }
    lo = std::min(lo, emin);
    hi = std::max(hi, emax);
  }
  a_ = values;
  da_ = derivs;
  lower_ = std::min(1.0, std::sqrt(lo));
  upper_ = std::max(1.0, std::sqrt(hi));
}

double AlphaSymbol::quadratic(std::size_t p, const Frequency& xi, bool derivative) const {
  const auto& src = derivative ? *da_ : *a_;
  const double x0 = xi[0], x1 = xi[1];
  if (dim_ == 1) return src[0][p] * x0 * x0;
  return src[0][p] * x0 * x0 + 2.0 * src[1][p] * x0 * x1 + src[2][p] * x1 * x1;
}

double AlphaSymbol::value(std::size_t p, const Frequency& xi) const {
  const double g2 = gamma_ * gamma_;
  return std::sqrt((g2 + quadratic(p, xi, false)) / (g2 + norm_of(xi) * norm_of(xi)));
}

double AlphaSymbol::time_derivative(std::size_t p, const Frequency& xi) const {
  const double g2 = gamma_ * gamma_;
  const double lam = std::sqrt(g2 + norm_of(xi) * norm_of(xi));
  return quadratic(p, xi, true) / (2.0 * std::sqrt(g2 + quadratic(p, xi, false)) * lam);
}

ParamSymbol AlphaSymbol::power(double p) const {
  ParamSymbol s;
  s.order = 0.0;
  auto self = *this;
  s.column = [self, p](const Frequency& xi, std::span<Complex> out) {
    for (std::size_t q = 0; q < out.size(); ++q) out[q] = std::pow(self.value(q, xi), p);
  };
  return s;
}

ParamSymbol AlphaSymbol::half_lambda() const {
  ParamSymbol s;
  s.order = 1.0;
  auto self = *this;
  s.column = [self](const Frequency& xi, std::span<Complex> out) {
    const double lam = std::hypot(self.gamma_, norm_of(xi));
    for (std::size_t q = 0; q < out.size(); ++q) out[q] = std::sqrt(self.value(q, xi)) * lam;
  };
  return s;
}

ParamSymbol AlphaSymbol::squared_lambda() const {
  ParamSymbol s;
  s.order = 2.0;
  auto self = *this;
  s.column = [self](const Frequency& xi, std::span<Complex> out) {
    const double g2 = self.gamma_ * self.gamma_;
    for (std::size_t q = 0; q < out.size(); ++q) out[q] = g2 + self.quadratic(q, xi, false);
  };
  return s;
}

ParamSymbol AlphaSymbol::dt_inverse_sqrt() const {
  ParamSymbol s;
  s.order = 0.0;
  auto self = *this;
  s.column = [self](const Frequency& xi, std::span<Complex> out) {
    for (std::size_t q = 0; q < out.size(); ++q)
      out[q] = -0.5 * std::pow(self.value(q, xi), -1.5) * self.time_derivative(q, xi);
  };
  return s;
}

AlphaSymbol alpha_symbol(const CoefficientField& a_eps, double gamma, double t,
                         const TorusGrid& grid) {
  return AlphaSymbol(a_eps, gamma, t, grid);
}

GammaChoice choose_gamma_mu(const CoefficientField& a, const std::vector<SpectralField>& probes,
                            const GammaSearch& search) {
  if (probes.empty()) throw DomainError("gamma search needs at least one probe");
  const auto& grid = probes.front().grid();
  GammaChoice choice;
  choice.lambda0 = a.lambda0();
  const double target = 0.5 * choice.lambda0;
  for (int g = 0; g <= search.max_log2_gamma; ++g) {
    const double gamma = std::ldexp(1.0, g);
    if (std::ldexp(1.0, g + 1) > grid.nyquist()) break;  // 2^{mu+3} <= M/2
    const auto cutoff = cutoff_for_gamma(gamma, grid);
    choice.tried.push_back(gamma);
    double m_l2 = INFINITY, m_h1 = INFINITY;
    std::size_t worst = 0;
    double worst_t = 0.0;
    int worst_nu = 0;
    for (int nu : search.nus) {
      const auto a_eps = a.epsilon() > 0.0 ? a : smooth_in_time(a, std::ldexp(1.0, -nu));
      for (double t : search.times) {
        const AlphaSymbol alpha(a_eps, gamma, t, grid);
        const auto s1 = alpha.power(-0.5);
        const auto s2 = alpha.half_lambda();
        for (std::size_t p = 0; p < probes.size(); ++p) {
          const auto& w = probes[p];
          const double l2 = coefficient_norm(apply_parad(cutoff, s1, w)) /
                            (target * coefficient_norm(w));
          const double h1 = coefficient_norm(apply_parad(cutoff, s2, w)) /
                            (target * sobolev_norm(w, {1.0, 0.0, gamma}));
          if (std::min(l2, h1) < std::min(m_l2, m_h1)) {
            worst = p;
            worst_t = t;
            worst_nu = nu;
          }
          m_l2 = std::min(m_l2, l2);
          m_h1 = std::min(m_h1, h1);
        }
      }
    }
    choice.gamma = gamma;
    choice.mu = g - 2;
    choice.margin_l2 = m_l2;
    choice.margin_h1 = m_h1;
    choice.worst_probe = worst;
    choice.worst_time = worst_t;
    choice.worst_nu = worst_nu;
    if (m_l2 >= search.margin && m_h1 >= search.margin) {
      choice.found = true;
      return choice;
    }
  }
  return choice;
}

PositivityReport positivity_probe(const ParamCutoff& cutoff, const ParamSymbol& a,
                                  const std::vector<SpectralField>& probes) {
  PositivityReport rep;
  rep.min_ratio = INFINITY;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const auto& u = probes[p];
    const auto tu = apply_parad(cutoff, a, u);
    const auto c1 = tu.coefficients();
    const auto c0 = u.coefficients();
    Complex pair = 0.0;
    for (std::size_t i = 0; i < c0.size(); ++i) pair += c1[i] * std::conj(c0[i]);
    const double n = sobolev_norm(u, {0.5 * a.order, 0.0, cutoff.gamma()});
    const double r = pair.real() / (n * n);
    rep.ratios.push_back(r);
    if (r < rep.min_ratio) {
      rep.min_ratio = r;
      rep.worst_probe = p;
    }
  }
  rep.positive = rep.min_ratio > 0.0;
  return rep;
}

namespace {

double slope_against_rings(const std::vector<int>& js, const std::vector<double>& values,
                           bool log_corrected) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < js.size(); ++i) {
    if (!(values[i] > 0.0)) continue;
    x.push_back(std::ldexp(1.0, js[i]));
    y.push_back(log_corrected ? values[i] / (js[i] + 1.0) : values[i]);
  }
  if (x.size() < 2) return -INFINITY;
  return log_log_slope(x, y);
}

}  // namespace

RemainderReport remainder_probe(const ParamCutoff& cutoff, const ParamSymbol& a,
                                const ParamSymbol& b, const std::vector<int>& rings,
                                const std::vector<std::vector<SpectralField>>& probes,
                                double tolerance) {
  if (rings.size() != probes.size() || rings.size() < 2)
    throw DimensionError("remainder probe needs one probe set per ring (at least two rings)");
  RemainderReport rep;
  rep.composition_bound = a.order + b.order - 1.0;
  rep.adjoint_bound = a.order - 1.0;
  const auto ab = product(a, b);
  const auto abar = conjugate(a);
  std::vector<double> comp, adj;
  for (std::size_t r = 0; r < rings.size(); ++r) {
    RemainderRing ring;
    ring.j = rings[r];
    for (const auto& u : probes[r]) {
      const double nu = coefficient_norm(u);
      const auto tatb = apply_parad(cutoff, a, apply_parad(cutoff, b, u));
      const auto tab = apply_parad(cutoff, ab, u);
      ring.composition = std::max(ring.composition, coefficient_norm(tatb - tab) / nu);
      const auto adjoint = apply_parad_adjoint(cutoff, a, u);
      const auto tbar = apply_parad(cutoff, abar, u);
      ring.adjoint = std::max(ring.adjoint, coefficient_norm(adjoint - tbar) / nu);
    }
    comp.push_back(ring.composition);
    adj.push_back(ring.adjoint);
    rep.composition_constant = std::max(rep.composition_constant,
                                        ring.composition / (ring.j + 1.0) /
                                            std::pow(2.0, ring.j * rep.composition_bound));
    rep.adjoint_constant = std::max(
        rep.adjoint_constant, ring.adjoint / (ring.j + 1.0) / std::pow(2.0, ring.j * rep.adjoint_bound));
    rep.rings.push_back(ring);
  }
  rep.composition_zero = std::all_of(comp.begin(), comp.end(), [](double v) { return v <= 1e-13; });
  rep.composition_slope_raw = slope_against_rings(rings, comp, false);
  rep.composition_slope = slope_against_rings(rings, comp, true);
  rep.adjoint_slope_raw = slope_against_rings(rings, adj, false);
  rep.adjoint_slope = slope_against_rings(rings, adj, true);
  rep.passed = rep.composition_slope <= rep.composition_bound + tolerance &&
               rep.adjoint_slope <= rep.adjoint_bound + tolerance;
  return rep;
}

// ---------------------------------------------------------------------------

SymbolBoundsReport symbol_derivative_bounds(const CoefficientField& a, const ParamCutoff& cutoff,
                                            const std::vector<double>& epsilons,
                                            const std::vector<int>& xi_samples, double t) {
  const auto& g = cutoff.grid();
  if (g.dim() != 1) throw DimensionError("symbol derivative bounds are measured in one dimension");
  if (a.dim() != 1) throw DimensionError("symbol derivative bounds need a 1-D coefficient");
  const double gamma = cutoff.gamma();
  SymbolBoundsReport rep;
  rep.epsilon = epsilons;
  rep.xi = xi_samples;
  static const char* names[6] = {"sigma",          "dx sigma",          "sigma dt",
                                 "dx sigma dt",    "sigma dt2",         "dx sigma dt2"};
  rep.families.resize(12);
  for (int f = 0; f < 12; ++f) {
    rep.families[f].name = std::string(names[f / 2]) + (f % 2 ? " dxi" : "");
    rep.families[f].ratio.assign(epsilons.size(), std::vector<double>(xi_samples.size()));
  }
  const bool flat_x = a.is_constant_in_space();
  std::vector<Complex> sh(g.size()), sv(g.size());
  for (std::size_t ie = 0; ie < epsilons.size(); ++ie) {
    const double eps = epsilons[ie];
    const auto a_eps = smooth_in_time(a, eps);
    const double lt = std::log(1.0 + gamma + 1.0 / eps);
    for (int d = 0; d <= 2; ++d) {
      const auto samples = a_eps.sample(0, 0, t, g, d);
      std::vector<Complex> col(samples.begin(), samples.end());
      auto ah = forward_of(g, col);
      if (flat_x) {
        for (std::size_t i = 1; i < ah.size(); ++i) ah[i] = 0.0;
      }
      // sup_x of sigma and d_x sigma at xi = n - 1, n, n + 1
      auto sigma = [&](int n, bool dx) {
        const auto idx = g.index_of({n, 0});
        if (!idx) throw DomainError("symbol sample outside the lattice");
        std::fill(sh.begin(), sh.end(), Complex(0.0));
        for (const auto& e : cutoff.row(*idx)) {
          const auto ei = g.index_of(e.eta);
          if (!ei) continue;
          sh[*ei] = e.psi * ah[*ei] * (dx ? Complex(0.0, e.eta[0]) : Complex(1.0));
        }
        g.inverse(sh, sv);
        return sv;
      };
      for (std::size_t ix = 0; ix < xi_samples.size(); ++ix) {
        const int n = xi_samples[ix];
        const double scale = gamma + std::abs(n);
        const double lx = std::log(1.0 + gamma + std::abs(n));
        for (int dx = 0; dx <= 1; ++dx) {
          const auto s0 = sigma(n, dx);
          const auto sp = sigma(n + 1, dx);
          const auto sm = sigma(n - 1, dx);
          double v0 = 0.0, v1 = 0.0;
          for (std::size_t p = 0; p < g.size(); ++p) {
            v0 = std::max(v0, std::abs(s0[p]));
            v1 = std::max(v1, 0.5 * std::abs(sp[p] - sm[p]));
          }
          double bound;
          if (d == 0) bound = dx ? lx : 1.0;
          else if (d == 1) bound = dx ? lx / eps : lt * lt;
          else bound = dx ? lx / (eps * eps) : lt / eps;
          const int fam = 2 * (2 * d + dx);
          rep.families[fam].ratio[ie][ix] = v0 / bound;
          rep.families[fam + 1].ratio[ie][ix] = v1 * scale / bound;
        }
      }
    }
  }
  for (auto& fam : rep.families) {
    std::vector<double> by_eps, eps_x, by_xi, xi_x;
    for (std::size_t ie = 0; ie < epsilons.size(); ++ie) {
      const double m = *std::max_element(fam.ratio[ie].begin(), fam.ratio[ie].end());
      fam.max_ratio = std::max(fam.max_ratio, m);
      if (m > 0.0) {
        by_eps.push_back(m);
        eps_x.push_back(epsilons[ie]);
      }
    }
    for (std::size_t ix = 0; ix < xi_samples.size(); ++ix) {
      double m = 0.0;
      for (std::size_t ie = 0; ie < epsilons.size(); ++ie) m = std::max(m, fam.ratio[ie][ix]);
      if (m > 0.0) {
        by_xi.push_back(m);
        xi_x.push_back(gamma + std::abs(xi_samples[ix]));
      }
    }
    fam.identically_zero = fam.max_ratio == 0.0;
    fam.slope_eps = by_eps.size() >= 2 ? log_log_slope(eps_x, by_eps) : 0.0;
    fam.slope_xi = by_xi.size() >= 2 ? log_log_slope(xi_x, by_xi) : 0.0;
  }
  return rep;
}

}  // namespace lpwave
