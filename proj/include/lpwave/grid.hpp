#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace lpwave {

using Complex = std::complex<double>;

/// Integer lattice point; the second component is 0 on one-dimensional grids.
using Frequency = std::array<int, 2>;

namespace detail {
class FftPlan;
}

/// The periodic torus [0, 2pi)^N sampled with M points per axis.
///
/// Frequencies run over {-M/2, ..., M/2 - 1}^N and are stored in FFT order.
/// On two-dimensional grids the flat index is i0 * M + i1.
class TorusGrid {
 public:
  TorusGrid(int dim, int points_per_axis);

  int dim() const noexcept { return dim_; }
  int points_per_axis() const noexcept { return m_; }
  std::size_t size() const noexcept { return size_; }
  int nyquist() const noexcept { return m_ / 2; }
  double spacing() const noexcept;
  /// (2 pi)^N, the Lebesgue measure of the torus.
  double volume() const noexcept;

  Frequency frequency(std::size_t flat) const noexcept;
  double frequency_norm(std::size_t flat) const noexcept;
  /// Flat index of a lattice point, or nullopt outside the frequency set.
  std::optional<std::size_t> index_of(Frequency k) const noexcept;
  std::array<double, 2> point(std::size_t flat) const noexcept;

  /// Normalized forward transform: coefficients c with u(x) = sum c(k) e^{ikx}.
  void forward(std::span<const Complex> values, std::span<Complex> coeffs) const;
  void inverse(std::span<const Complex> coeffs, std::span<Complex> values) const;

  bool operator==(const TorusGrid& other) const noexcept {
    return dim_ == other.dim_ && m_ == other.m_;
  }

 private:
  int dim_;
  int m_;
  std::size_t size_;
  std::shared_ptr<const detail::FftPlan> plan_;
};

enum class Parity { real, complex };

/// Scalar function on the torus, held as samples and Fourier coefficients.
///
/// Immutable once built. Whichever representation was not supplied is
/// computed on first access; copies share that state.
class SpectralField {
 public:
  static SpectralField from_values(const TorusGrid& grid, std::vector<Complex> values,
                                   Parity parity = Parity::complex);
  static SpectralField from_real_values(const TorusGrid& grid, std::span<const double> values);
  static SpectralField from_coefficients(const TorusGrid& grid, std::vector<Complex> coeffs,
                                         Parity parity = Parity::complex);
  static SpectralField zero(const TorusGrid& grid);
  /// amplitude * e^{i k.x}
  static SpectralField mode(const TorusGrid& grid, Frequency k, Complex amplitude = 1.0);

  const TorusGrid& grid() const noexcept;
  Parity parity() const noexcept;
  bool has_values() const noexcept;
  bool has_coefficients() const noexcept;

  std::span<const Complex> values() const;
  std::span<const Complex> coefficients() const;
  Complex coefficient(Frequency k) const;

  /// Largest deviation from Hermitian symmetry of the coefficients.
  double hermitian_defect() const;

  SpectralField operator+(const SpectralField& other) const;
  SpectralField operator-(const SpectralField& other) const;
  SpectralField scaled(Complex factor) const;

 private:
  struct State;
  explicit SpectralField(std::shared_ptr<const State> state) : state_(std::move(state)) {}
  std::shared_ptr<const State> state_;
};

/// Returns a field with both representations populated.
SpectralField transform(const SpectralField& field);

/// (u, v) = integral of u * conj(v) over the torus, by physical quadrature.
Complex l2_inner(const SpectralField& u, const SpectralField& v);
/// The same pairing evaluated as (2 pi)^N * sum of u^(k) conj(v^(k)).
Complex parseval_inner(const SpectralField& u, const SpectralField& v);
double l2_norm(const SpectralField& u);
/// sqrt(sum |u^(k)|^2): the L2 norm for the normalized measure dx / (2 pi)^N.
double coefficient_norm(const SpectralField& u);

/// Fourier multiplier u^(k) -> m(k) u^(k).
SpectralField apply_multiplier(const SpectralField& u,
                               const std::function<Complex(const Frequency&, double)>& m);
/// Real radial multiplier m(|k|); preserves the parity tag.
SpectralField apply_radial(const SpectralField& u, const std::function<double(double)>& m);
/// Partial derivative along `axis`; the Nyquist mode is dropped.
SpectralField derivative(const SpectralField& u, int axis);

/// Real random field with Gaussian coefficients scaled by amplitude(|k|).
/// Nyquist modes are left at zero so the field stays exactly Hermitian.
SpectralField random_real_field(const TorusGrid& grid, std::mt19937_64& rng,
                                const std::function<double(double)>& amplitude);

}  // namespace lpwave
