#include "gkdv/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"

namespace gkdv {

void ModelParams::validate() const {
  if (!(mu != 0.0) || !std::isfinite(mu)) throw DomainError("mu must be a nonzero finite real");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive and finite");
}

const char* to_string(Scheme s) noexcept {
  return s == Scheme::etdrk4 ? "etdrk4" : "ifrk4";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "etdrk4") return Scheme::etdrk4;
  if (name == "ifrk4") return Scheme::ifrk4;
  throw UnsupportedError("unknown scheme '" + name + "'");
}

void StepperConfig::validate() const {
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw DomainError("dt must be finite and >= 0 (0 = auto)");
  if (oversample < 1) throw DomainError("oversample must be >= 1");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw DomainError("cfl_safety must lie in (0, 1]");
}

SimState make_state(double t, RealField u) {
  const double b = boundary_mass_fraction(u);
  return SimState{t, std::move(u), b};
}

Trajectory::Trajectory(ModelParams params, GridSpec grid, double dt, std::size_t store_stride, int oversample)
    : params_(params), grid_(grid), dt_(dt), store_stride_(store_stride), oversample_(oversample) {}

void Trajectory::push_back(SimState s) {
  if (!(s.u.grid() == grid_)) throw InvalidFieldError("slice grid does not match trajectory grid");
  if (!slices_.empty() && !(s.t > slices_.back().t)) {
    throw InvalidFieldError("slice times must increase strictly");
  }
  slices_.push_back(std::move(s));
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t(slices_.size());
  for (std::size_t i = 0; i < slices_.size(); ++i) t[i] = slices_[i].t;
  return t;
}

std::vector<double> Trajectory::quadrature_weights() const {
  std::vector<double> w(slices_.size(), 0.0);
  for (std::size_t i = 1; i < slices_.size(); ++i) {
    const double h = slices_[i].t - slices_[i - 1].t;
    w[i - 1] += 0.5 * h;
    w[i] += 0.5 * h;
  }
  return w;
}

bool Trajectory::uniform() const noexcept {
  if (slices_.size() < 3) return true;
  const double h = slices_[1].t - slices_[0].t;
  for (std::size_t i = 2; i < slices_.size(); ++i) {
    if (std::abs((slices_[i].t - slices_[i - 1].t) - h) > 1e-9 * h) return false;
  }
  return true;
}

double Trajectory::spacing() const {
  if (slices_.size() < 2) throw UnsupportedError("trajectory has fewer than two slices");
  if (!uniform()) throw UnsupportedError("stored slices are not uniformly spaced");
  return (slices_.back().t - slices_.front().t) / static_cast<double>(slices_.size() - 1);
}

Trajectory Trajectory::subsample(std::size_t k) const {
  if (k == 0) throw DomainError("subsample factor must be positive");
  Trajectory out(params_, grid_, dt_, store_stride_ * k, oversample_);
  for (std::size_t i = 0; i < slices_.size(); i += k) out.slices_.push_back(slices_[i]);
  out.blowup_ = blowup_;
  out.blowup_reason_ = blowup_reason_;
  return out;
}

void Trajectory::mark_blowup(std::string reason) {
  blowup_ = true;
  blowup_reason_ = std::move(reason);
}

namespace {

// Nonlinear flux in spectral space on raw FFT-ordered buffers.
void flux_hat(const GridSpec& grid, const ModelParams& params, int oversample,
              std::span<const Complex> uhat, std::span<Complex> out) {
  const std::size_t n = grid.size();
  const std::size_t half = n / 2;
  const double alpha = params.alpha;
  auto power = [alpha](double v) { return std::pow(v * v, alpha) * v; };

  if (oversample == 1) {
    std::vector<double> u(n);
    detail::to_physical(grid, uhat, u);
    for (double& v : u) v = power(v);
    detail::to_spectral(grid, u, out);
  } else {
    const std::size_t m = n * static_cast<std::size_t>(oversample);
    const GridSpec fine(m, grid.length());
    std::vector<Complex> padded(m, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < half; ++k) padded[k] = uhat[k];
    for (std::size_t k = half + 1; k < n; ++k) padded[m - (n - k)] = uhat[k];
    std::vector<double> u(m);
    detail::to_physical(fine, padded, u);
    for (double& v : u) v = power(v);
    detail::to_spectral(fine, u, padded);
    for (std::size_t k = 0; k < half; ++k) out[k] = padded[k];
    for (std::size_t k = half + 1; k < n; ++k) out[k] = padded[m - (n - k)];
  }
  out[half] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == half) continue;
    out[k] *= Complex(0.0, params.mu * grid.xi(k));
  }
}

// ETDRK4 weights phi(z) for purely imaginary z. Close to the origin the
// closed forms cancel catastrophically, so the mean over a circle is used.
struct EtdWeights {
  Complex q, f1, f2, f3;
};

EtdWeights etd_direct(Complex z) {
  const Complex ez = std::exp(z);
  const Complex z3 = z * z * z;
  return {(std::exp(0.5 * z) - 1.0) / z,
          (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3,
          (2.0 + z + ez * (-2.0 + z)) / z3,
          (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3};
}

EtdWeights etd_contour(Complex z) {
  constexpr int kPoints = 64;
  EtdWeights acc{};
  for (int j = 0; j < kPoints; ++j) {
    const double theta = 2.0 * std::numbers::pi * (j + 0.5) / kPoints;
    const EtdWeights w = etd_direct(z + std::polar(1.0, theta));
    acc.q += w.q;
    acc.f1 += w.f1;
    acc.f2 += w.f2;
    acc.f3 += w.f3;
  }
  const double inv = 1.0 / kPoints;
  return {acc.q * inv, acc.f1 * inv, acc.f2 * inv, acc.f3 * inv};
}

EtdWeights etd_weights(Complex z) { return std::abs(z) < 0.5 ? etd_contour(z) : etd_direct(z); }

}  // namespace

SpectralField nonlinear_flux(const SpectralField& u, const ModelParams& params, int oversample) {
  if (oversample < 1) throw DomainError("oversample must be >= 1");
  SpectralField out(u.grid());
  flux_hat(u.grid(), params, oversample, u.coeffs(), out.coeffs());
  return out;
}

RealField nonlinear_flux(const RealField& u, const ModelParams& params, int oversample) {
  return inverse_transform(nonlinear_flux(forward_transform(u), params, oversample));
}

RealField rhs_time_derivative(const RealField& u, const ModelParams& params, int oversample) {
  SpectralField uhat = forward_transform(u);
  SpectralField f = nonlinear_flux(uhat, params, oversample);
  SpectralField d3 = spatial_derivative(uhat, 3);
  auto c = f.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k) c[k] -= d3[k];
  return inverse_transform(f);
}

RealField power_nonlinearity(const RealField& u, double alpha) {
  RealField out(u.grid());
  for (std::size_t j = 0; j < u.size(); ++j) out[j] = std::pow(u[j] * u[j], alpha) * u[j];
  return out;
}

double stable_dt(const RealField& u, const ModelParams& params, double cfl_safety) {
  const double amp = u.max_abs();
  const double speed = (2.0 * params.alpha + 1.0) * std::pow(amp, 2.0 * params.alpha);
  return cfl_safety * u.grid().dx() / std::max(1.0, speed);
}

StepPlan plan_steps(double T, double dt_max, std::size_t store_stride, std::size_t min_slices) {
  if (!(T > 0.0) || !(dt_max > 0.0)) throw DomainError("plan_steps needs T > 0 and dt > 0");
  // Tolerate T/dt landing a hair above an integer.
  const auto base = static_cast<std::size_t>(std::ceil(T / dt_max * (1.0 - 1e-12)));
  const std::size_t needed = std::max<std::size_t>(base, 1);
  std::size_t stride = store_stride;
  if (stride == 0) stride = std::max<std::size_t>(1, needed / std::max<std::size_t>(min_slices, 1));
  const std::size_t intervals = (needed + stride - 1) / stride;
  const std::size_t steps = intervals * stride;
  return {T / static_cast<double>(steps), steps, stride};
}

Stepper::Stepper(const GridSpec& grid, const ModelParams& params, double dt, int oversample, Scheme scheme)
    : grid_(grid), params_(params), dt_(dt), oversample_(oversample), scheme_(scheme) {
  params_.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step must be positive");
  if (oversample < 1) throw DomainError("oversample must be >= 1");
  const std::size_t n = grid.size();
  e_full_.resize(n);
  e_half_.resize(n);
  if (scheme_ == Scheme::etdrk4) {
    q_.resize(n);
    f1_.resize(n);
    f2_.resize(n);
    f3_.resize(n);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double xi = k == grid.nyquist_index() ? 0.0 : grid.xi(k);
    const double phase = xi * xi * xi * dt;
    e_full_[k] = std::polar(1.0, phase);
    e_half_[k] = std::polar(1.0, 0.5 * phase);
    if (scheme_ == Scheme::etdrk4) {
      const EtdWeights w = etd_weights(Complex(0.0, phase));
      q_[k] = w.q;
      f1_[k] = w.f1;
      f2_[k] = w.f2;
      f3_[k] = w.f3;
    }
  }
}

void Stepper::flux(const std::vector<Complex>& uhat, std::vector<Complex>& out) const {
  flux_hat(grid_, params_, oversample_, uhat, out);
}

void Stepper::advance(std::vector<Complex>& u) const {
  const std::size_t n = u.size();
  const double h = dt_;
  std::vector<Complex> nu(n), na(n), nb(n), nc(n), a(n), b(n), c(n);
  if (scheme_ == Scheme::etdrk4) {
    flux(u, nu);
    for (std::size_t k = 0; k < n; ++k) a[k] = e_half_[k] * u[k] + h * q_[k] * nu[k];
    flux(a, na);
    for (std::size_t k = 0; k < n; ++k) b[k] = e_half_[k] * u[k] + h * q_[k] * na[k];
    flux(b, nb);
    for (std::size_t k = 0; k < n; ++k) c[k] = e_half_[k] * a[k] + h * q_[k] * (2.0 * nb[k] - nu[k]);
    flux(c, nc);
    for (std::size_t k = 0; k < n; ++k) {
      u[k] = e_full_[k] * u[k] + h * (f1_[k] * nu[k] + 2.0 * f2_[k] * (na[k] + nb[k]) + f3_[k] * nc[k]);
    }
  } else {
    flux(u, nu);
    for (std::size_t k = 0; k < n; ++k) a[k] = e_half_[k] * (u[k] + 0.5 * h * nu[k]);
    flux(a, na);
    for (std::size_t k = 0; k < n; ++k) b[k] = e_half_[k] * u[k] + 0.5 * h * na[k];
    flux(b, nb);
    for (std::size_t k = 0; k < n; ++k) c[k] = e_full_[k] * u[k] + h * e_half_[k] * nb[k];
    flux(c, nc);
    for (std::size_t k = 0; k < n; ++k) {
      u[k] = e_full_[k] * u[k] +
             h / 6.0 * (e_full_[k] * nu[k] + 2.0 * e_half_[k] * (na[k] + nb[k]) + nc[k]);
    }
  }
}

namespace {

// Empty string when u is acceptable, otherwise the reason it is not.
std::string blowup_check(const RealField& u, double reference) {
  if (!u.all_finite()) return "non-finite values";
  if (reference > 0.0 && u.max_abs() > Stepper::kBlowupFactor * reference) {
    return "amplitude exceeded 1e6 x initial";
  }
  return {};
}

}  // namespace

SimState Stepper::step(const SimState& s) const {
  if (!(s.u.grid() == grid_)) throw InvalidFieldError("state grid does not match stepper grid");
  std::vector<Complex> uhat(grid_.size());
  detail::to_spectral(grid_, s.u.samples(), uhat);
  advance(uhat);
  RealField u(grid_);
  detail::to_physical(grid_, uhat, u.samples());
  const double ref = reference_amplitude_ > 0.0 ? reference_amplitude_ : s.u.max_abs();
  const std::string why = blowup_check(u, ref);
  if (!why.empty()) throw BlowupDetected(s, "blow-up detected at t=" + std::to_string(s.t + dt_) + ": " + why);
  return make_state(s.t + dt_, std::move(u));
}

Trajectory evolve(const RealField& u0, const ModelParams& params, const StepperConfig& cfg, double T,
                  std::size_t store_stride) {
  params.validate();
  cfg.validate();
  if (!(T >= 0.0) || !std::isfinite(T)) throw DomainError("horizon T must be finite and >= 0");
  if (!u0.all_finite()) throw InvalidFieldError("initial data contains non-finite samples");
  const GridSpec& grid = u0.grid();

  if (T == 0.0) {
    Trajectory traj(params, grid, cfg.dt, std::max<std::size_t>(store_stride, 1), cfg.oversample);
    traj.push_back(make_state(0.0, u0));
    return traj;
  }

  const double dt_max = cfg.dt > 0.0 ? cfg.dt : stable_dt(u0, params, cfg.cfl_safety);
  const StepPlan plan = plan_steps(T, dt_max, store_stride);
  Trajectory traj(params, grid, plan.dt, plan.store_stride, cfg.oversample);
  traj.push_back(make_state(0.0, u0));

  Stepper stepper(grid, params, plan.dt, cfg.oversample, cfg.scheme);
  const double ref = u0.max_abs();
  std::vector<Complex> uhat(grid.size());
  detail::to_spectral(grid, u0.samples(), uhat);
  RealField u(grid);
  for (std::size_t i = 1; i <= plan.steps; ++i) {
    stepper.advance(uhat);
    const bool store = i % plan.store_stride == 0;
    const bool check = store || i % 8 == 0 || i == plan.steps;
    if (!check) continue;
    detail::to_physical(grid, uhat, u.samples());
    const std::string why = blowup_check(u, ref);
    if (!why.empty()) {
      traj.mark_blowup("t=" + std::to_string(static_cast<double>(i) * plan.dt) + ": " + why);
      break;
    }
    if (store) {
      const double t = i == plan.steps ? T : static_cast<double>(i) * plan.dt;
      traj.push_back(make_state(t, u));
    }
  }
  return traj;
}

RealField make_gaussian(const GridSpec& grid, double A, double x0, double w) {
  if (!(w > 0.0)) throw DomainError("Gaussian width must be positive");
  RealField u(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double y = (grid.x(j) - x0) / w;
    u[j] = A * std::exp(-y * y);
  }
  return u;
}

double soliton_amplitude(double c, const ModelParams& params) {
  if (!(c > 0.0)) throw DomainError("soliton speed must be positive");
  if (!(params.mu < 0.0)) throw DomainError("solitons require the focusing sign mu < 0");
  return std::pow(c * (params.alpha + 1.0) / std::abs(params.mu), 1.0 / (2.0 * params.alpha));
}

RealField make_soliton(const GridSpec& grid, double c, const ModelParams& params) {
  const double amp = soliton_amplitude(c, params);
  const double a = params.alpha;
  const double k = a * std::sqrt(c);
  RealField u(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    u[j] = amp * std::pow(1.0 / std::cosh(k * grid.x(j)), 1.0 / a);
  }
  return u;
}

}  // namespace gkdv
