#include "lpwave/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "lpwave/errors.hpp"

namespace lpwave {

namespace detail {

// FFTW plans are created under a global lock (the planner is not reentrant)
// and executed through the new-array interface, which is thread safe.
class FftPlan {
 public:
  FftPlan(int dim, int m) : size_(static_cast<std::size_t>(m) * (dim == 2 ? m : 1)) {
    auto* in = fftw_alloc_complex(size_);
    auto* out = fftw_alloc_complex(size_);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (dim == 1) {
      forward_ = fftw_plan_dft_1d(m, in, out, FFTW_FORWARD, flags);
      backward_ = fftw_plan_dft_1d(m, in, out, FFTW_BACKWARD, flags);
    } else {
      forward_ = fftw_plan_dft_2d(m, m, in, out, FFTW_FORWARD, flags);
      backward_ = fftw_plan_dft_2d(m, m, in, out, FFTW_BACKWARD, flags);
    }
    fftw_free(in);
    fftw_free(out);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  void run(bool forward, const Complex* in, Complex* out) const {
    // fftw never writes to the input of an out-of-place complex transform.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in));
    auto* dst = reinterpret_cast<fftw_complex*>(out);
    fftw_execute_dft(forward ? forward_ : backward_, src, dst);
  }
  std::size_t size() const noexcept { return size_; }

 private:
  std::size_t size_;
  fftw_plan forward_{};
  fftw_plan backward_{};
};

namespace {
std::shared_ptr<const FftPlan> plan_for(int dim, int m) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const FftPlan>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, m}];
  if (!slot) slot = std::make_shared<const FftPlan>(dim, m);
  return slot;
}
}  // namespace

}  // namespace detail

namespace {
bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }
}  // namespace

TorusGrid::TorusGrid(int dim, int points_per_axis) : dim_(dim), m_(points_per_axis) {
  if (dim != 1 && dim != 2) throw ConfigurationError("torus dimension must be 1 or 2");
  if (!is_power_of_two(points_per_axis) || points_per_axis < 16)
    throw ConfigurationError("points per axis must be a power of two >= 16, got " +
                             std::to_string(points_per_axis));
  size_ = static_cast<std::size_t>(m_) * (dim_ == 2 ? static_cast<std::size_t>(m_) : 1u);
  plan_ = detail::plan_for(dim_, m_);
}

double TorusGrid::spacing() const noexcept { return 2.0 * std::numbers::pi / m_; }

double TorusGrid::volume() const noexcept {
  const double l = 2.0 * std::numbers::pi;
  return dim_ == 2 ? l * l : l;
}

Frequency TorusGrid::frequency(std::size_t flat) const noexcept {
  auto wrap = [this](std::size_t i) {
    const int k = static_cast<int>(i);
    return k < m_ / 2 ? k : k - m_;
  };
  if (dim_ == 1) return {wrap(flat), 0};
  return {wrap(flat / static_cast<std::size_t>(m_)), wrap(flat % static_cast<std::size_t>(m_))};
}

double TorusGrid::frequency_norm(std::size_t flat) const noexcept {
  const auto k = frequency(flat);
  if (dim_ == 1) return std::abs(static_cast<double>(k[0]));
  return std::sqrt(static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1]);
}

std::optional<std::size_t> TorusGrid::index_of(Frequency k) const noexcept {
  auto slot = [this](int f) -> std::optional<std::size_t> {
    if (f < -m_ / 2 || f >= m_ / 2) return std::nullopt;
    return static_cast<std::size_t>(f >= 0 ? f : f + m_);
  };
  const auto i0 = slot(k[0]);
  if (!i0) return std::nullopt;
  if (dim_ == 1) return k[1] == 0 ? i0 : std::nullopt;
  const auto i1 = slot(k[1]);
  if (!i1) return std::nullopt;
  return *i0 * static_cast<std::size_t>(m_) + *i1;
}

std::array<double, 2> TorusGrid::point(std::size_t flat) const noexcept {
  const double h = spacing();
  if (dim_ == 1) return {h * static_cast<double>(flat), 0.0};
  return {h * static_cast<double>(flat / static_cast<std::size_t>(m_)),
          h * static_cast<double>(flat % static_cast<std::size_t>(m_))};
}

void TorusGrid::forward(std::span<const Complex> values, std::span<Complex> coeffs) const {
  if (values.size() != size_ || coeffs.size() != size_)
    throw DimensionError("forward transform: buffer size does not match the grid");
  plan_->run(true, values.data(), coeffs.data());
  const double scale = 1.0 / static_cast<double>(size_);
  for (auto& c : coeffs) c *= scale;
}

void TorusGrid::inverse(std::span<const Complex> coeffs, std::span<Complex> values) const {
  if (values.size() != size_ || coeffs.size() != size_)
    throw DimensionError("inverse transform: buffer size does not match the grid");
  plan_->run(false, coeffs.data(), values.data());
}

// ---------------------------------------------------------------------------

struct SpectralField::State {
  State(const TorusGrid& g, Parity p) : grid(g), parity(p) {}
  TorusGrid grid;
  Parity parity;
  mutable std::once_flag values_once;
  mutable std::once_flag coeffs_once;
  mutable std::vector<Complex> values;
  mutable std::vector<Complex> coeffs;
  mutable std::atomic<bool> values_ready{false};
  mutable std::atomic<bool> coeffs_ready{false};
};

SpectralField SpectralField::from_values(const TorusGrid& grid, std::vector<Complex> values,
                                         Parity parity) {
  if (values.size() != grid.size()) throw DimensionError("sample count does not match the grid");
  auto state = std::make_shared<State>(grid, parity);
  state->values = std::move(values);
  state->values_ready = true;
  std::call_once(state->values_once, [] {});
  return SpectralField(std::move(state));
}

SpectralField SpectralField::from_real_values(const TorusGrid& grid,
                                              std::span<const double> values) {
  std::vector<Complex> v(values.begin(), values.end());
  return from_values(grid, std::move(v), Parity::real);
}

SpectralField SpectralField::from_coefficients(const TorusGrid& grid, std::vector<Complex> coeffs,
                                               Parity parity) {
  if (coeffs.size() != grid.size())
    throw DimensionError("coefficient count does not match the grid");
  auto state = std::make_shared<State>(grid, parity);
  state->coeffs = std::move(coeffs);
  state->coeffs_ready = true;
  std::call_once(state->coeffs_once, [] {});
  return SpectralField(std::move(state));
}

SpectralField SpectralField::zero(const TorusGrid& grid) {
  return from_coefficients(grid, std::vector<Complex>(grid.size()), Parity::real);
}

SpectralField SpectralField::mode(const TorusGrid& grid, Frequency k, Complex amplitude) {
  const auto idx = grid.index_of(k);
  if (!idx) throw DomainError("mode outside the frequency set");
  std::vector<Complex> c(grid.size());
  c[*idx] = amplitude;
  return from_coefficients(grid, std::move(c));
}

const TorusGrid& SpectralField::grid() const noexcept { return state_->grid; }
Parity SpectralField::parity() const noexcept { return state_->parity; }
bool SpectralField::has_values() const noexcept { return state_->values_ready; }
bool SpectralField::has_coefficients() const noexcept { return state_->coeffs_ready; }

std::span<const Complex> SpectralField::values() const {
  const State& s = *state_;
  std::call_once(s.values_once, [&s] {
    s.values.resize(s.grid.size());
    s.grid.inverse(s.coeffs, s.values);
    if (s.parity == Parity::real)
      for (auto& v : s.values) v = v.real();
    s.values_ready = true;
  });
  return s.values;
}

std::span<const Complex> SpectralField::coefficients() const {
  const State& s = *state_;
  std::call_once(s.coeffs_once, [&s] {
    s.coeffs.resize(s.grid.size());
    s.grid.forward(s.values, s.coeffs);
    s.coeffs_ready = true;
  });
  return s.coeffs;
}

Complex SpectralField::coefficient(Frequency k) const {
  const auto idx = grid().index_of(k);
  if (!idx) return 0.0;
  return coefficients()[*idx];
}

double SpectralField::hermitian_defect() const {
  const auto c = coefficients();
  const auto& g = grid();
  double defect = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto k = g.frequency(i);
    Frequency minus{-k[0], -k[1]};
    // -(-M/2) wraps onto itself
    for (int a = 0; a < 2; ++a)
      if (minus[a] == g.nyquist()) minus[a] = -g.nyquist();
    const auto j = g.index_of(minus);
    if (j) defect = std::max(defect, std::abs(c[i] - std::conj(c[*j])));
  }
  return defect;
}

namespace {
void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw DimensionError("fields live on different grids");
}
Parity combine(Parity a, Parity b) {
  return a == Parity::real && b == Parity::real ? Parity::real : Parity::complex;
}
}  // namespace

SpectralField SpectralField::operator+(const SpectralField& other) const {
  require_same_grid(*this, other);
  const auto a = coefficients();
  const auto b = other.coefficients();
  std::vector<Complex> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
  return from_coefficients(grid(), std::move(c), combine(parity(), other.parity()));
}

SpectralField SpectralField::operator-(const SpectralField& other) const {
  require_same_grid(*this, other);
  const auto a = coefficients();
  const auto b = other.coefficients();
  std::vector<Complex> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] - b[i];
  return from_coefficients(grid(), std::move(c), combine(parity(), other.parity()));
}

SpectralField SpectralField::scaled(Complex factor) const {
  const auto a = coefficients();
  std::vector<Complex> c(a.begin(), a.end());
  for (auto& x : c) x *= factor;
  const Parity p = factor.imag() == 0.0 ? parity() : Parity::complex;
  return from_coefficients(grid(), std::move(c), p);
}

SpectralField transform(const SpectralField& field) {
  field.values();
  field.coefficients();
  return field;
}

Complex l2_inner(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u, v);
  const auto a = u.values();
  const auto b = v.values();
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * std::conj(b[i]);
  return sum * (u.grid().volume() / static_cast<double>(u.grid().size()));
}

Complex parseval_inner(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u, v);
  const auto a = u.coefficients();
  const auto b = v.coefficients();
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * std::conj(b[i]);
  return sum * u.grid().volume();
}

double coefficient_norm(const SpectralField& u) {
  double sum = 0.0;
  for (const auto& c : u.coefficients()) sum += std::norm(c);
  return std::sqrt(sum);
}

double l2_norm(const SpectralField& u) {
  return std::sqrt(u.grid().volume()) * coefficient_norm(u);
}

SpectralField apply_multiplier(const SpectralField& u,
                               const std::function<Complex(const Frequency&, double)>& m) {
  const auto& g = u.grid();
  const auto a = u.coefficients();
  std::vector<Complex> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    if (a[i] != 0.0) c[i] = m(g.frequency(i), g.frequency_norm(i)) * a[i];
  return SpectralField::from_coefficients(g, std::move(c), Parity::complex);
}

SpectralField apply_radial(const SpectralField& u, const std::function<double(double)>& m) {
  const auto& g = u.grid();
  const auto a = u.coefficients();
  std::vector<Complex> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    if (a[i] != 0.0) c[i] = m(g.frequency_norm(i)) * a[i];
  return SpectralField::from_coefficients(g, std::move(c), u.parity());
}

SpectralField derivative(const SpectralField& u, int axis) {
  const auto& g = u.grid();
  if (axis < 0 || axis >= g.dim()) throw DimensionError("derivative axis out of range");
  const auto a = u.coefficients();
  std::vector<Complex> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int k = g.frequency(i)[static_cast<std::size_t>(axis)];
    if (k == -g.nyquist()) continue;
    c[i] = Complex(0.0, static_cast<double>(k)) * a[i];
  }
  return SpectralField::from_coefficients(g, std::move(c), u.parity());
}

SpectralField random_real_field(const TorusGrid& grid, std::mt19937_64& rng,
                                const std::function<double(double)>& amplitude) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> c(grid.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto k = grid.frequency(i);
    if (k[0] == -grid.nyquist() || k[1] == -grid.nyquist()) continue;
    // fill one representative per +-k pair, mirror the conjugate
    const bool representative = k[0] > 0 || (k[0] == 0 && k[1] >= 0);
    if (!representative) continue;
    const double amp = amplitude(grid.frequency_norm(i));
    const double re = normal(rng);
    const double im = normal(rng);
    if (amp == 0.0) continue;
    const auto j = *grid.index_of({-k[0], -k[1]});
    if (j == i) {
      c[i] = amp * re;
    } else {
      c[i] = amp * Complex(re, im) / std::sqrt(2.0);
      c[j] = std::conj(c[i]);
    }
  }
  return SpectralField::from_coefficients(grid, std::move(c), Parity::real);
}

}  // namespace lpwave
