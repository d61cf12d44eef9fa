#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gkdv/error.hpp"
#include "gkdv/spectral.hpp"

namespace gkdv {

/// Coefficients of d_t u + d_x^3 u = mu d_x(|u|^{2 alpha} u).
struct ModelParams {
  double mu = 1.0;
  double alpha = 1.8;

  /// Throws DomainError unless mu != 0 and alpha > 0.
  void validate() const;
  /// 8/5 < alpha < 2, the small-data scattering range.
  bool in_theory_range() const noexcept { return alpha > 1.6 && alpha < 2.0; }
  bool focusing() const noexcept { return mu < 0.0; }
};

enum class Scheme { etdrk4, ifrk4 };

const char* to_string(Scheme s) noexcept;
Scheme scheme_from_string(const std::string& name);

struct StepperConfig {
  /// Fixed step; 0 selects stable_dt() from the initial data.
  double dt = 0.0;
  int oversample = 2;
  double cfl_safety = 0.2;
  Scheme scheme = Scheme::etdrk4;

  void validate() const;
};

struct SimState {
  double t = 0.0;
  RealField u;
  double boundary_mass_fraction = 0.0;
};

SimState make_state(double t, RealField u);

/// Stored slices of one run together with the metadata needed to interpret them.
class Trajectory {
 public:
  Trajectory(ModelParams params, GridSpec grid, double dt, std::size_t store_stride, int oversample = 2);

  const ModelParams& params() const noexcept { return params_; }
  const GridSpec& grid() const noexcept { return grid_; }
  double dt() const noexcept { return dt_; }
  std::size_t store_stride() const noexcept { return store_stride_; }
  int oversample() const noexcept { return oversample_; }

  const std::vector<SimState>& slices() const noexcept { return slices_; }
  std::size_t size() const noexcept { return slices_.size(); }
  bool empty() const noexcept { return slices_.empty(); }
  const SimState& operator[](std::size_t i) const { return slices_[i]; }
  const SimState& front() const { return slices_.front(); }
  const SimState& back() const { return slices_.back(); }

  /// Appends a slice; times must increase strictly.
  void push_back(SimState s);

  std::vector<double> times() const;
  /// Trapezoid weights over the stored times.
  std::vector<double> quadrature_weights() const;
  /// Whether consecutive stored times are equally spaced (relative tolerance 1e-9).
  bool uniform() const noexcept;
  /// Common stored spacing; throws UnsupportedError when not uniform.
  double spacing() const;
  /// Every k-th slice, starting from the first.
  Trajectory subsample(std::size_t k) const;

  bool blowup() const noexcept { return blowup_; }
  const std::string& blowup_reason() const noexcept { return blowup_reason_; }
  void mark_blowup(std::string reason);

 private:
  ModelParams params_;
  GridSpec grid_;
  double dt_;
  std::size_t store_stride_;
  int oversample_;
  std::vector<SimState> slices_;
  bool blowup_ = false;
  std::string blowup_reason_;
};

/// mu d_x(|u|^{2 alpha} u), power evaluated on a zero-padded grid of oversample * n points.
RealField nonlinear_flux(const RealField& u, const ModelParams& params, int oversample = 2);
SpectralField nonlinear_flux(const SpectralField& u, const ModelParams& params, int oversample = 2);

/// -d_x^3 u + mu d_x(|u|^{2 alpha} u).
RealField rhs_time_derivative(const RealField& u, const ModelParams& params, int oversample = 2);

/// |u|^{2 alpha} u, pointwise.
RealField power_nonlinearity(const RealField& u, double alpha);

/// cfl_safety * dx / max(1, (2 alpha + 1) max|u|^{2 alpha}).
double stable_dt(const RealField& u, const ModelParams& params, double cfl_safety);

struct StepPlan {
  double dt;
  std::size_t steps;
  std::size_t store_stride;
};

/// Splits [0, T] into equal steps no longer than dt_max. A store_stride of 0
/// picks the largest stride that still stores at least min_slices intervals.
StepPlan plan_steps(double T, double dt_max, std::size_t store_stride = 0, std::size_t min_slices = 200);

class BlowupDetected : public Error {
 public:
  BlowupDetected(SimState last_good, const std::string& what)
      : Error(what), last_good_(std::move(last_good)) {}
  const SimState& last_good() const noexcept { return last_good_; }

 private:
  SimState last_good_;
};

/// Fixed-step integrator for one grid, model and step size. The linear part
/// is propagated exactly; the flux is treated by ETDRK4 or IFRK4.
class Stepper {
 public:
  Stepper(const GridSpec& grid, const ModelParams& params, double dt, int oversample = 2,
          Scheme scheme = Scheme::etdrk4);

  double dt() const noexcept { return dt_; }
  const GridSpec& grid() const noexcept { return grid_; }

  /// Advances by one step. Throws BlowupDetected when the result is not finite
  /// or max|u| exceeds blowup_factor times the reference amplitude.
  SimState step(const SimState& s) const;

  /// Advances spectral coefficients in place.
  void advance(std::vector<Complex>& uhat) const;

  void set_reference_amplitude(double a) noexcept { reference_amplitude_ = a; }
  static constexpr double kBlowupFactor = 1e6;

 private:
  void flux(const std::vector<Complex>& uhat, std::vector<Complex>& out) const;

  GridSpec grid_;
  ModelParams params_;
  double dt_;
  int oversample_;
  Scheme scheme_;
  double reference_amplitude_ = 0.0;
  std::vector<Complex> e_full_, e_half_;
  std::vector<Complex> q_, f1_, f2_, f3_;
};

/// Integrates u0 over [0, T] storing every store_stride steps (0 = automatic).
/// On blow-up returns the slices so far with the blow-up flag set.
Trajectory evolve(const RealField& u0, const ModelParams& params, const StepperConfig& cfg, double T,
                  std::size_t store_stride = 0);

/// A exp(-(x - x0)^2 / w^2).
RealField make_gaussian(const GridSpec& grid, double A, double x0, double w);

/// Focusing traveling wave Q(x) = (c(alpha+1)/|mu|)^{1/(2 alpha)} sech^{1/alpha}(alpha sqrt(c) x),
/// moving right with speed c. Requires mu < 0 and c > 0.
RealField make_soliton(const GridSpec& grid, double c, const ModelParams& params);
double soliton_amplitude(double c, const ModelParams& params);

}  // namespace gkdv
