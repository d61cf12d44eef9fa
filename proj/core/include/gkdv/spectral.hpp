#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gkdv {

using Complex = std::complex<double>;

/// Uniform periodic grid on [-L/2, L/2) standing in for the real line.
///
/// Spectral arrays are kept in FFT order: index k < n/2 carries wavenumber
/// 2*pi*k/L, index k >= n/2 carries 2*pi*(k-n)/L. Index n/2 is the unpaired
/// Nyquist mode.
class GridSpec {
 public:
  GridSpec(std::size_t n, double length);

  std::size_t size() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double dx() const noexcept { return length_ / static_cast<double>(n_); }
  double dxi() const noexcept;
  double x(std::size_t j) const noexcept {
    return -0.5 * length_ + static_cast<double>(j) * dx();
  }
  /// Signed mode number of spectral index k, in [-n/2, n/2).
  long mode(std::size_t k) const noexcept {
    return k < n_ / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n_);
  }
  double xi(std::size_t k) const noexcept { return static_cast<double>(mode(k)) * dxi(); }
  std::size_t nyquist_index() const noexcept { return n_ / 2; }
  /// Spectral index carrying the wavenumber of opposite sign.
  std::size_t mirror(std::size_t k) const noexcept { return k == 0 ? 0 : n_ - k; }
  double max_wavenumber() const noexcept;

  std::vector<double> coordinates() const;
  std::vector<double> wavenumbers() const;

  bool operator==(const GridSpec&) const = default;

 private:
  std::size_t n_;
  double length_;
};

/// Real samples u(x_j) on a grid.
class RealField {
 public:
  explicit RealField(const GridSpec& grid);
  RealField(const GridSpec& grid, std::vector<double> samples);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return samples_.size(); }
  std::span<const double> samples() const noexcept { return samples_; }
  std::span<double> samples() noexcept { return samples_; }
  double operator[](std::size_t j) const noexcept { return samples_[j]; }
  double& operator[](std::size_t j) noexcept { return samples_[j]; }

  bool all_finite() const noexcept;
  double max_abs() const noexcept;

  RealField& operator+=(const RealField& other);
  RealField& operator-=(const RealField& other);
  RealField& operator*=(double s) noexcept;

 private:
  GridSpec grid_;
  std::vector<double> samples_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double s, RealField a);
/// Pointwise product.
RealField hadamard(const RealField& a, const RealField& b);

/// Continuum-normalized Fourier coefficients,
/// u_hat(xi) = (2 pi)^{-1/2} * integral u(x) e^{-i x xi} dx (trapezoid rule).
class SpectralField {
 public:
  explicit SpectralField(const GridSpec& grid);
  SpectralField(const GridSpec& grid, std::vector<Complex> coeffs);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  Complex operator[](std::size_t k) const noexcept { return coeffs_[k]; }
  Complex& operator[](std::size_t k) noexcept { return coeffs_[k]; }

  /// Largest |u_hat(-xi) - conj(u_hat(xi))| over all modes (Nyquist: |Im|).
  double symmetry_defect() const noexcept;
  /// sqrt(sum |u_hat|^2 dxi).
  double l2_norm() const noexcept;

 private:
  GridSpec grid_;
  std::vector<Complex> coeffs_;
};

SpectralField forward_transform(const RealField& u);
/// Throws SymmetryViolationError when the coefficients do not describe a real
/// profile (defect above 1e-12 of the coefficient norm).
RealField inverse_transform(const SpectralField& f);

/// Multiplication by e^{i t xi^3}: the free Airy group V(t).
SpectralField airy_propagate(const SpectralField& f, double t);
RealField airy_propagate(const RealField& u, double t);

/// Multiplication by (i xi)^k for k <= 4.
SpectralField spatial_derivative(const SpectralField& f, int order);
/// Convenience: d^k u / dx^k through the spectral route.
RealField derivative(const RealField& u, int order);

/// Riesz potential |D_x|^s = multiplication by |xi|^s, s >= 0.
SpectralField fractional_derivative(const SpectralField& f, double s);

RealField multiply_by_x(const RealField& u);

/// Fraction of sum u^2 carried by the outer 10% of the box (|x| > 0.4 L).
double boundary_mass_fraction(const RealField& u);

/// Threshold above which x-weighted diagnostics are flagged as contaminated.
inline constexpr double kBoundaryMassAdvisory = 1e-8;

inline bool boundary_advisory(const RealField& u) {
  return boundary_mass_fraction(u) > kBoundaryMassAdvisory;
}

/// L^2(dx) inner product by the trapezoid (periodic) rule.
double inner_product(const RealField& a, const RealField& b);

}  // namespace gkdv
