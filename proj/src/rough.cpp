#include "lpwave/rough.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>

#include "lpwave/errors.hpp"
#include "lpwave/stats.hpp"

namespace lpwave {

namespace {

double raw_bump(double s) {
  const double q = 1.0 - s * s;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

template <class F>
double integrate(F f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-15);
}

// Beyond this frequency |rho^(w)| is below the quadrature accuracy (~1e-18) and is returned as zero.
constexpr double kFourierCutoff = 4000.0;

}  // namespace

struct MollifierKernel::Cache {
  std::mutex mutex;
  std::map<double, double> values;
};

MollifierKernel::MollifierKernel() : cache_(std::make_shared<Cache>()) {
  z_ = integrate(raw_bump, -1.0, 1.0);
  for (int q = 0; q <= 8; ++q) {
    if (q % 2 == 1) {
      moments_.push_back(0.0);
      continue;
    }
    moments_.push_back(
        2.0 * integrate([&](double s) { return std::pow(s, q) * raw_bump(s); }, 0.0, 1.0) / z_);
  }
}

const MollifierKernel& MollifierKernel::standard() {
  static const MollifierKernel kernel;
  return kernel;
}

double MollifierKernel::rho(double s) const { return raw_bump(s) / z_; }

double MollifierKernel::rho_derivative(double s) const {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  return -2.0 * s / (q * q) * raw_bump(s) / z_;
}

double MollifierKernel::moment(int q) const {
  if (q < 0 || q >= static_cast<int>(moments_.size()))
    throw DomainError("mollifier moment order out of range");
  return moments_[static_cast<std::size_t>(q)];
}

double MollifierKernel::fourier(double w) const {
  w = std::abs(w);
  if (w == 0.0) return 1.0;
  if (w > kFourierCutoff) return 0.0;
  {
    std::lock_guard lock(cache_->mutex);
    const auto it = cache_->values.find(w);
    if (it != cache_->values.end()) return it->second;
  }
  // one panel per ~1.3 oscillations keeps each Kronrod rule well resolved
  const int panels = std::max(1, static_cast<int>(std::ceil(w / 8.0)));
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = static_cast<double>(p) / panels;
    const double b = static_cast<double>(p + 1) / panels;
    sum += integrate([&](double s) { return raw_bump(s) * std::cos(w * s); }, a, b);
  }
  const double value = 2.0 * sum / z_;
  std::lock_guard lock(cache_->mutex);
  cache_->values.emplace(w, value);
  return value;
}

double EntrySeries::amplitude_sum() const {
  double s = 0.0;
  for (const auto& t : terms) s += std::abs(t.amplitude);
  return s;
}

namespace {

std::size_t entry_index(int dim, int i, int j) {
  if (i < 0 || j < 0 || i >= dim || j >= dim) throw DimensionError("matrix index out of range");
  return static_cast<std::size_t>(i + j);
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double falling(int n, int d) {
  double r = 1.0;
  for (int i = 0; i < d; ++i) r *= n - i;
  return r;
}

double entry_value(const EntrySeries& e, double epsilon, double t, const std::array<double, 2>& x,
                   int order) {
  const auto& kernel = MollifierKernel::standard();
  double v = order == 0 ? e.base : 0.0;
  for (const auto& term : e.terms) {
    double amp = term.amplitude;
    if (epsilon > 0.0) amp *= kernel.fourier(epsilon * term.omega);
    if (amp == 0.0) continue;
    if (order > 0) {
      if (term.omega == 0.0) continue;
      amp *= std::pow(term.omega, order);
    }
    const double arg = term.omega * t + term.k[0] * x[0] + term.k[1] * x[1] + term.phase;
    v += amp * std::cos(arg + order * std::numbers::pi / 2);
  }
  for (const auto& p : e.poly) {
    // rho_eps * t^p = sum over even q of C(p, q) m_q eps^q t^(p - q)
    for (int q = 0; q <= p.power; q += 2) {
      if (q > 0 && epsilon == 0.0) break;
      const int n = p.power - q;
      if (order > n) continue;
      const double c = p.coefficient * binomial(p.power, q) *
                       (q == 0 ? 1.0 : kernel.moment(q) * std::pow(epsilon, q));
      v += c * falling(n, order) * std::pow(t, n - order);
    }
  }
  return v;
}

double poly_bound(const EntrySeries& e, double t0, double t1) {
  double s = 0.0;
  const double r = std::max(std::abs(t0), std::abs(t1));
  for (const auto& p : e.poly) s += std::abs(p.coefficient) * std::pow(r, p.power);
  return s;
}

struct Eigen2 {
  double lo, hi;
  std::array<double, 2> v_lo, v_hi;
};

Eigen2 symmetric_eigen(double a, double b, double c) {
  const double m = 0.5 * (a + c);
  const double d = std::hypot(0.5 * (a - c), b);
  Eigen2 e{m - d, m + d, {1.0, 0.0}, {0.0, 1.0}};
  if (b != 0.0 || a != c) {
    const double ang = 0.5 * std::atan2(2.0 * b, a - c);
    e.v_hi = {std::cos(ang), std::sin(ang)};
    e.v_lo = {-std::sin(ang), std::cos(ang)};
  }
  return e;
}

}  // namespace

CoefficientField::CoefficientField(int dim, std::vector<EntrySeries> entries, double t_begin,
                                   double t_end)
    : dim_(dim), entries_(std::move(entries)), t_begin_(t_begin), t_end_(t_end) {
  if (dim != 1 && dim != 2) throw DimensionError("coefficient dimension must be 1 or 2");
  if (entries_.size() != (dim == 1 ? 1u : 3u))
    throw DimensionError("coefficient needs 1 entry in 1-D and 3 (a11, a12, a22) in 2-D");
  if (!(t_end > t_begin)) throw DomainError("empty coefficient time window");
  for (const auto& e : entries_)
    for (const auto& term : e.terms)
      if (dim == 1 && term.k[1] != 0) throw DimensionError("1-D coefficient with a second wave number");
  std::array<double, 3> s{};
  for (std::size_t i = 0; i < entries_.size(); ++i)
    s[i] = entries_[i].amplitude_sum() + poly_bound(entries_[i], t_begin_, t_end_);
  if (dim == 1) {
    lambda0_bound_ = entries_[0].base - s[0];
    Lambda0_bound_ = entries_[0].base + s[0];
  } else {
    const auto e = symmetric_eigen(entries_[0].base, entries_[1].base, entries_[2].base);
    const double p = std::max(s[0] + s[1], s[1] + s[2]);
    lambda0_bound_ = e.lo - p;
    Lambda0_bound_ = e.hi + p;
  }
  measure(65, 32);
}

const EntrySeries& CoefficientField::entry(int i, int j) const {
  return entries_[entry_index(dim_, i, j)];
}

double CoefficientField::value(int i, int j, double t, const std::array<double, 2>& x,
                               int order) const {
  if (order < 0 || order > 4) throw DomainError("time derivative order must lie in 0..4");
  return entry_value(entry(i, j), epsilon_, t, x, order);
}

std::vector<double> CoefficientField::sample(int i, int j, double t, const TorusGrid& grid,
                                             int order) const {
  if (grid.dim() != dim_) throw DimensionError("coefficient and grid dimensions differ");
  const auto& e = entry(i, j);
  std::vector<double> out(grid.size());
  // time factor of every term is shared by all points
  const auto& kernel = MollifierKernel::standard();
  std::vector<double> amp, kx0, kx1, shift;
  double constant = 0.0;
  {
    EntrySeries time_only = e;
    time_only.terms.clear();
    constant = entry_value(time_only, epsilon_, t, {0.0, 0.0}, order);
  }
  for (const auto& term : e.terms) {
    double a = term.amplitude;
    if (epsilon_ > 0.0) a *= kernel.fourier(epsilon_ * term.omega);
    if (order > 0) a *= term.omega == 0.0 ? 0.0 : std::pow(term.omega, order);
    if (a == 0.0) continue;
    amp.push_back(a);
    kx0.push_back(term.k[0]);
    kx1.push_back(term.k[1]);
    shift.push_back(term.omega * t + term.phase + order * std::numbers::pi / 2);
  }
  for (std::size_t p = 0; p < out.size(); ++p) {
    const auto x = grid.point(p);
    double v = constant;
    for (std::size_t q = 0; q < amp.size(); ++q)
      v += amp[q] * std::cos(kx0[q] * x[0] + kx1[q] * x[1] + shift[q]);
    out[p] = v;
  }
  return out;
}

double CoefficientField::quadratic_form(double t, const std::array<double, 2>& x,
                                        const std::array<double, 2>& xi, int order) const {
  if (dim_ == 1) return value(0, 0, t, x, order) * xi[0] * xi[0];
  return value(0, 0, t, x, order) * xi[0] * xi[0] + 2.0 * value(0, 1, t, x, order) * xi[0] * xi[1] +
         value(1, 1, t, x, order) * xi[1] * xi[1];
}

double CoefficientField::max_time_frequency() const {
  double w = 0.0;
  for (const auto& e : entries_)
    for (const auto& t : e.terms) w = std::max(w, std::abs(t.omega));
  return w;
}

int CoefficientField::max_space_frequency() const {
  int k = 0;
  for (const auto& e : entries_)
    for (const auto& t : e.terms) k = std::max({k, std::abs(t.k[0]), std::abs(t.k[1])});
  return k;
}

bool CoefficientField::is_constant_in_time() const {
  for (const auto& e : entries_) {
    if (!e.poly.empty()) return false;
    for (const auto& t : e.terms)
      if (t.omega != 0.0 && t.amplitude != 0.0) return false;
  }
  return true;
}

bool CoefficientField::is_constant_in_space() const {
  for (const auto& e : entries_)
    for (const auto& t : e.terms)
      if ((t.k[0] != 0 || t.k[1] != 0) && t.amplitude != 0.0) return false;
  return true;
}

void CoefficientField::measure(int sweep_times, int sweep_points) {
  if (sweep_times < 2 || sweep_points < 1) throw DomainError("ellipticity sweep too coarse");
  const double h = 2.0 * std::numbers::pi / sweep_points;
  const int ny = dim_ == 2 ? sweep_points : 1;
  bool first = true;
  for (int it = 0; it < sweep_times; ++it) {
    const double t = t_begin_ + (t_end_ - t_begin_) * it / (sweep_times - 1);
    for (int i0 = 0; i0 < sweep_points; ++i0) {
      for (int i1 = 0; i1 < ny; ++i1) {
        const std::array<double, 2> x{i0 * h, i1 * h};
        Eigen2 e;
        if (dim_ == 1) {
          const double a = value(0, 0, t, x);
          e = {a, a, {1.0, 0.0}, {1.0, 0.0}};
        } else {
          e = symmetric_eigen(value(0, 0, t, x), value(0, 1, t, x), value(1, 1, t, x));
        }
        if (first || e.lo < sweep_min_.value) sweep_min_ = {e.lo, t, x, e.v_lo};
        if (first || e.hi > sweep_max_.value) sweep_max_ = {e.hi, t, x, e.v_hi};
        first = false;
        if (e.lo <= 0.0)
          throw EllipticityError("coefficient matrix not positive definite at t=" +
                                     std::to_string(t) + ", x=(" + std::to_string(x[0]) + ", " +
                                     std::to_string(x[1]) + ")",
                                 t, x[0], x[1], e.v_lo[0], e.v_lo[1]);
      }
    }
  }
  // modulus constant from a time slice and space slices of every entry
  k0_ = 0.0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      Samples ts;
      const int nt = 4096;
      ts.spacing = (t_end_ - t_begin_) / (nt - 1);
      ts.periodic = false;
      for (int p = 0; p < nt; ++p) ts.values.push_back(value(i, j, t_begin_ + p * ts.spacing, {0.0, 0.0}));
      k0_ = std::max(k0_, lz_seminorm(ts).seminorm);
      for (int axis = 0; axis < dim_; ++axis) {
        Samples xs;
        const int nx = 1024;
        xs.spacing = 2.0 * std::numbers::pi / nx;
        xs.periodic = true;
        for (int p = 0; p < nx; ++p) {
          std::array<double, 2> x{0.0, 0.0};
          x[static_cast<std::size_t>(axis)] = p * xs.spacing;
          xs.values.push_back(value(i, j, 0.0, x));
        }
        k0_ = std::max(k0_, ll_seminorm(xs).seminorm);
      }
    }
  }
}

namespace {

LacunarySeries time_series(TimeRegularity kind, int depth, std::uint64_t seed) {
  switch (kind) {
    case TimeRegularity::log_zygmund: return lz_series(depth, seed);
    case TimeRegularity::lipschitz: return lipschitz_series(depth, seed);
    case TimeRegularity::none: break;
  }
  return {};
}

LacunarySeries space_series(SpaceRegularity kind, int depth, std::uint64_t seed) {
  switch (kind) {
    case SpaceRegularity::log_lipschitz: return ll_series(depth, seed);
    case SpaceRegularity::lipschitz: return lipschitz_series(depth, seed);
    case SpaceRegularity::none: break;
  }
  return {};
}

Frequency axis_wave(int dim, int axis, double k) {
  const int kk = static_cast<int>(k);
  if (dim == 1 || axis == 0) return {kk, 0};
  return {0, kk};
}

}  // namespace

CoefficientField make_coefficients(const CoefficientProfile& p) {
  if (p.dim != 1 && p.dim != 2) throw ConfigurationError("coefficient dimension must be 1 or 2");
  if (p.time_depth < 0 || p.space_depth < 0) throw ConfigurationError("series depth must be >= 0");
  if (p.amplitude < 0.0 || p.mixed_amplitude < 0.0)
    throw ConfigurationError("perturbation amplitudes must be nonnegative");
  {
    const double a = p.base[0];
    const double b = p.dim == 2 ? p.base[1] : 0.0;
    const double c = p.dim == 2 ? p.base[2] : a;
    if (symmetric_eigen(a, b, c).lo <= 0.0)
      throw ConfigurationError("base matrix is not positive definite");
  }
  const int n_entries = p.dim == 1 ? 1 : 3;
  std::vector<EntrySeries> entries(static_cast<std::size_t>(n_entries));
  // independent seeds per entry and per variable, derived from the profile seed
  std::mt19937_64 seeder(p.seed);
  for (int e = 0; e < n_entries; ++e) {
    auto& entry = entries[static_cast<std::size_t>(e)];
    entry.base = p.base[static_cast<std::size_t>(p.dim == 1 ? 0 : e)];
    // off-diagonal entries get half the perturbation to keep the matrix dominant
    const double scale = (p.dim == 2 && e == 1) ? 0.5 : 1.0;
    const auto ft = time_series(p.time_kind, p.time_depth, seeder());
    const auto gx = space_series(p.space_kind, p.space_depth, seeder());
    const int axis = (p.dim == 2 && e == 2) ? 1 : 0;
    for (std::size_t k = 0; k < ft.amplitude.size(); ++k)
      entry.terms.push_back({scale * p.amplitude * ft.amplitude[k], ft.frequency[k], {0, 0}, ft.phase[k]});
    for (std::size_t k = 0; k < gx.amplitude.size(); ++k)
      entry.terms.push_back(
          {scale * p.amplitude * gx.amplitude[k], 0.0, axis_wave(p.dim, axis, gx.frequency[k]), gx.phase[k]});
    if (p.mixed_amplitude > 0.0) {
      // cos A cos B = (cos(A + B) + cos(A - B)) / 2
      for (std::size_t a = 0; a < ft.amplitude.size(); ++a) {
        for (std::size_t b = 0; b < gx.amplitude.size(); ++b) {
          const double amp = 0.5 * scale * p.mixed_amplitude * ft.amplitude[a] * gx.amplitude[b];
          const auto kp = axis_wave(p.dim, axis, gx.frequency[b]);
          entry.terms.push_back({amp, ft.frequency[a], kp, ft.phase[a] + gx.phase[b]});
          entry.terms.push_back({amp, ft.frequency[a], {-kp[0], -kp[1]}, ft.phase[a] - gx.phase[b]});
        }
      }
    }
  }
  CoefficientField field(p.dim, std::move(entries), p.t_begin, p.t_end);
  if (p.sweep_times != 65 || p.sweep_points != 32) field.measure(p.sweep_times, p.sweep_points);
  return field;
}

CoefficientField constant_coefficients(int dim, std::array<double, 3> base, double t_begin,
                                       double t_end) {
  CoefficientProfile p;
  p.dim = dim;
  p.base = base;
  p.amplitude = 0.0;
  p.time_kind = TimeRegularity::none;
  p.space_kind = SpaceRegularity::none;
  p.t_begin = t_begin;
  p.t_end = t_end;
  p.sweep_times = 65;
  p.sweep_points = 32;
  return make_coefficients(p);
}

CoefficientField smooth_in_time(const CoefficientField& a, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("mollification scale must lie in (0, 1]");
  if (a.epsilon_ > 0.0) throw DomainError("coefficient is already mollified");
  if (2.0 * epsilon > a.t_end_ - a.t_begin_)
    throw DomainError("mollification scale exceeds half the time window");
  CoefficientField out = a;
  out.epsilon_ = epsilon;
  out.t_begin_ += epsilon;
  out.t_end_ -= epsilon;
  return out;
}

std::vector<MollifierFit> mollifier_bound_fit(const CoefficientField& a,
                                              const std::vector<double>& gammas,
                                              const std::vector<double>& epsilons, int points,
                                              double t0, double tolerance) {
  if (a.epsilon() > 0.0) throw DomainError("mollifier fit needs an unmollified coefficient");
  if (epsilons.size() < 2 || points < 16) throw DomainError("mollifier fit needs >= 2 scales");
  const auto& e = a.entry(0, 0);
  const auto& kernel = MollifierKernel::standard();
  // per-term cos/sin tables over the sample times, shared by every scale
  std::vector<const TrigTerm*> terms;
  for (const auto& t : e.terms)
    if (t.omega != 0.0 && t.amplitude != 0.0) terms.push_back(&t);
  const auto n = static_cast<std::size_t>(points);
  std::vector<std::vector<double>> c(terms.size(), std::vector<double>(n)),
      s(terms.size(), std::vector<double>(n));
  for (std::size_t q = 0; q < terms.size(); ++q) {
    const auto& t = *terms[q];
    // spatial phase at x = 0 is just the stored phase
    for (std::size_t i = 0; i < n; ++i) {
      const double arg = t.omega * (t0 + static_cast<double>(i) / points) + t.phase;
      c[q][i] = std::cos(arg);
      s[q][i] = std::sin(arg);
    }
  }
  std::vector<double> sup0, sup1, sup2;
  std::vector<double> d0(n), d1(n), d2(n);
  for (double eps : epsilons) {
    if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("mollification scale must lie in (0, 1]");
    std::fill(d0.begin(), d0.end(), 0.0);
    std::fill(d1.begin(), d1.end(), 0.0);
    std::fill(d2.begin(), d2.end(), 0.0);
    for (std::size_t q = 0; q < terms.size(); ++q) {
      const auto& t = *terms[q];
      const double r = kernel.fourier(eps * t.omega);
      const double a0 = t.amplitude * (r - 1.0);
      const double a1 = -t.amplitude * r * t.omega;
      const double a2 = -t.amplitude * r * t.omega * t.omega;
      for (std::size_t i = 0; i < n; ++i) {
        d0[i] += a0 * c[q][i];
        d1[i] += a1 * s[q][i];
        d2[i] += a2 * c[q][i];
      }
    }
    // polynomial part at the sample times
    if (!e.poly.empty()) {
      EntrySeries poly_only;
      poly_only.poly = e.poly;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + static_cast<double>(i) / points;
        d0[i] += entry_value(poly_only, eps, t, {0, 0}, 0) - entry_value(poly_only, 0.0, t, {0, 0}, 0);
        d1[i] += entry_value(poly_only, eps, t, {0, 0}, 1);
        d2[i] += entry_value(poly_only, eps, t, {0, 0}, 2);
      }
    }
    auto supabs = [](const std::vector<double>& v) {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      return m;
    };
    sup0.push_back(supabs(d0));
    sup1.push_back(supabs(d1));
    sup2.push_back(supabs(d2));
  }
  const double k0 = a.K0() > 0.0 ? a.K0() : 1.0;
  auto slope_of = [&](const std::vector<double>& r) {
    if (std::all_of(r.begin(), r.end(), [](double v) { return v == 0.0; })) return 0.0;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i] > 0.0) {
        xs.push_back(epsilons[i]);
        ys.push_back(r[i]);
      }
    return xs.size() >= 2 ? log_log_slope(xs, ys) : 0.0;
  };
  std::vector<MollifierFit> out;
  for (double gamma : gammas) {
    MollifierFit fit;
    fit.gamma = gamma;
    fit.epsilon = epsilons;
    fit.sup_difference = sup0;
    fit.sup_first = sup1;
    fit.sup_second = sup2;
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
      const double eps = epsilons[i];
      const double lg = std::log(1.0 + gamma + 1.0 / eps);
      fit.ratio_difference.push_back(sup0[i] / (k0 * eps * lg));
      fit.ratio_first.push_back(sup1[i] / (k0 * lg * lg));
      fit.ratio_second.push_back(sup2[i] / (k0 * lg / eps));
    }
    fit.slope_difference = slope_of(fit.ratio_difference);
    fit.slope_first = slope_of(fit.ratio_first);
    fit.slope_second = slope_of(fit.ratio_second);
    fit.c_difference = *std::max_element(fit.ratio_difference.begin(), fit.ratio_difference.end());
    fit.c_first = *std::max_element(fit.ratio_first.begin(), fit.ratio_first.end());
    fit.c_second = *std::max_element(fit.ratio_second.begin(), fit.ratio_second.end());
    fit.passed = std::abs(fit.slope_difference) <= tolerance &&
                 std::abs(fit.slope_first) <= tolerance && std::abs(fit.slope_second) <= tolerance;
    out.push_back(std::move(fit));
  }
  return out;
}

}  // namespace lpwave
