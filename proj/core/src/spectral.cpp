#include "gkdv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "gkdv/error.hpp"

namespace gkdv {

GridSpec::GridSpec(std::size_t n, double length) : n_(n), length_(length) {
  if (n < 2 || n % 2 != 0) {
    throw InvalidFieldError("grid size must be a positive even integer, got " + std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidFieldError("grid length must be positive and finite");
  }
}

double GridSpec::dxi() const noexcept { return 2.0 * std::numbers::pi / length_; }

double GridSpec::max_wavenumber() const noexcept { return static_cast<double>(n_ / 2) * dxi(); }

std::vector<double> GridSpec::coordinates() const {
  std::vector<double> x(n_);
  for (std::size_t j = 0; j < n_; ++j) x[j] = this->x(j);
  return x;
}

std::vector<double> GridSpec::wavenumbers() const {
  std::vector<double> xi(n_);
  for (std::size_t k = 0; k < n_; ++k) xi[k] = this->xi(k);
  return xi;
}

RealField::RealField(const GridSpec& grid) : grid_(grid), samples_(grid.size(), 0.0) {}

RealField::RealField(const GridSpec& grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size()) {
    throw InvalidFieldError("sample count " + std::to_string(samples_.size()) +
                            " does not match grid size " + std::to_string(grid_.size()));
  }
}

bool RealField::all_finite() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

double RealField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw InvalidFieldError("fields live on different grids");
}

}  // namespace

RealField& RealField::operator+=(const RealField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] += other.samples_[j];
  return *this;
}

RealField& RealField::operator-=(const RealField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] -= other.samples_[j];
  return *this;
}

RealField& RealField::operator*=(double s) noexcept {
  for (double& v : samples_) v *= s;
  return *this;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(double s, RealField a) { return a *= s; }

RealField hadamard(const RealField& a, const RealField& b) {
  require_same_grid(a.grid(), b.grid());
  RealField out(a.grid());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

SpectralField::SpectralField(const GridSpec& grid) : grid_(grid), coeffs_(grid.size()) {}

SpectralField::SpectralField(const GridSpec& grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) {
    throw InvalidFieldError("coefficient count does not match grid size");
  }
}

double SpectralField::symmetry_defect() const noexcept {
  double d = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const std::size_t m = grid_.mirror(k);
    d = std::max(d, std::abs(coeffs_[m] - std::conj(coeffs_[k])));
  }
  return d;
}

double SpectralField::l2_norm() const noexcept {
  double s = 0.0;
  for (const Complex& c : coeffs_) s += std::norm(c);
  return std::sqrt(s * grid_.dxi());
}

SpectralField forward_transform(const RealField& u) {
  if (!u.all_finite()) throw InvalidFieldError("field contains non-finite samples");
  SpectralField f(u.grid());
  detail::to_spectral(u.grid(), u.samples(), f.coeffs());
  return f;
}

RealField inverse_transform(const SpectralField& f) {
  double scale = 0.0;
  for (const Complex& c : f.coeffs()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw InvalidFieldError("spectral field contains non-finite coefficients");
    }
    scale = std::max(scale, std::abs(c));
  }
  const double defect = f.symmetry_defect();
  if (defect > 1e-12 * scale) {
    throw SymmetryViolationError("coefficients are not conjugate symmetric (defect " +
                                 std::to_string(defect) + ")");
  }
  RealField u(f.grid());
  detail::to_physical(f.grid(), f.coeffs(), u.samples());
  return u;
}

SpectralField airy_propagate(const SpectralField& f, double t) {
  SpectralField out = f;
  if (t == 0.0) return out;
  const GridSpec& g = f.grid();
  auto c = out.coeffs();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (k == g.nyquist_index()) continue;
    const double xi = g.xi(k);
    const double phase = t * xi * xi * xi;
    c[k] *= Complex(std::cos(phase), std::sin(phase));
  }
  return out;
}

RealField airy_propagate(const RealField& u, double t) {
  if (t == 0.0) return u;
  return inverse_transform(airy_propagate(forward_transform(u), t));
}

SpectralField spatial_derivative(const SpectralField& f, int order) {
  if (order < 0 || order > 4) {
    throw UnsupportedOrderError("derivative order must be in [0, 4], got " + std::to_string(order));
  }
  SpectralField out = f;
  if (order == 0) return out;
  const GridSpec& g = f.grid();
  auto c = out.coeffs();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (order % 2 == 1 && k == g.nyquist_index()) {
      c[k] = 0.0;
      continue;
    }
    const double xi = g.xi(k);
    Complex m(1.0, 0.0);
    for (int i = 0; i < order; ++i) m *= Complex(0.0, xi);
    c[k] *= m;
  }
  return out;
}

RealField derivative(const RealField& u, int order) {
  return inverse_transform(spatial_derivative(forward_transform(u), order));
}

SpectralField fractional_derivative(const SpectralField& f, double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw UnsupportedError("fractional derivative order must be finite and >= 0");
  }
  SpectralField out = f;
  if (s == 0.0) return out;
  const GridSpec& g = f.grid();
  auto c = out.coeffs();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (k == 0 || k == g.nyquist_index()) {
      c[k] = 0.0;
      continue;
    }
    c[k] *= std::pow(std::abs(g.xi(k)), s);
  }
  return out;
}

RealField multiply_by_x(const RealField& u) {
  RealField out(u.grid());
  const GridSpec& g = u.grid();
  for (std::size_t j = 0; j < g.size(); ++j) out[j] = g.x(j) * u[j];
  return out;
}

double boundary_mass_fraction(const RealField& u) {
  const GridSpec& g = u.grid();
  const double edge = 0.4 * g.length();
  double total = 0.0;
  double outer = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double w = u[j] * u[j];
    total += w;
    if (std::abs(g.x(j)) > edge) outer += w;
  }
  return total > 0.0 ? outer / total : 0.0;
}

double inner_product(const RealField& a, const RealField& b) {
  require_same_grid(a.grid(), b.grid());
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s * a.grid().dx();
}

}  // namespace gkdv
