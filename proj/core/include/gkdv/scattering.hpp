#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gkdv/evolve.hpp"
#include "gkdv/norms.hpp"
#include "gkdv/spectral.hpp"

namespace gkdv {

/// alpha / (3 (alpha - 1)(2 alpha + 1)); DomainError for alpha <= 1.
double kappa_threshold(double alpha);
/// alpha / (3 (2 alpha + 1)).
double kappa_step_constant(double alpha);
/// 1 / (2 alpha + 1).
double kappa_exit_target(double alpha);
/// 2 alpha / (3 (2 alpha + 1)), the decay rate of scattering solutions.
double kappa_scattering_rate(double alpha);
/// (1/(2 alpha + 1) + (alpha + 3)/(3 alpha (2 alpha + 1))) / 2.
double kappa_replacement(double alpha);
/// Midpoint of kappa_threshold and kappa_scattering_rate.
double kappa_default(double alpha);

struct KappaIteration {
  double alpha = 0.0;
  double kappa0 = 0.0;
  double step_constant = 0.0;
  std::vector<double> sequence;
  std::size_t j0 = 0;
  bool replacement_applied = false;
};

/// kappa_{j+1} = alpha kappa_j - alpha/(3(2 alpha + 1)) until the iterate exceeds
/// 1/(2 alpha + 1). An iterate landing exactly on 1/(2 alpha + 1) is replaced by
/// kappa_replacement(alpha) and iterated once more.
/// Throws NonConvergentError when kappa0 <= kappa_threshold(alpha).
KappaIteration kappa_iterate(double alpha, double kappa0);

struct CriteriaOptions {
  /// NaN selects kappa_default(alpha).
  double kappa = std::numeric_limits<double>::quiet_NaN();
  /// Growth factor for the weighted-norm test (ii).
  double theta = 1.5;
  /// Growth factor for the kappa-weighted and S-norm tests.
  double theta_decay = 1.05;
  /// Allowed distance of the L^inf decay exponent from -1/3.
  double decay_tolerance = 0.1;
  double fit_start = 5.0;
};

struct CriteriaReport {
  std::size_t slices = 0;
  double t_final = 0.0;
  double initial_weighted = 0.0;
  /// max over slices of sqrt(||u||^2 + ||Ju||^2)
  double sup_weighted = 0.0;
  double weighted_growth = 0.0;
  double s_norm_total = 0.0;
  double s_norm_growth = 0.0;
  double kappa_used = 0.0;
  /// max over slices of <t>^kappa ||u||_{L^{2(2 alpha + 1)}}
  double sup_kappa_weighted = 0.0;
  double kappa_growth = 0.0;
  double linf_decay_exponent = std::numeric_limits<double>::quiet_NaN();
  double linf_decay_r2 = std::numeric_limits<double>::quiet_NaN();
  double max_boundary_mass = 0.0;
  bool boundary_advisory = false;
  bool verdict_i = false;
  bool verdict_ii = false;
  bool verdict_iii = false;
  bool blowup_flag = false;
  std::string blowup_reason;
};

/// Per-slice scalars the verdicts are built from.
struct CriteriaSeries {
  NormSeries weighted;
  NormSeries kappa_weighted;
  NormSeries linf;
};

CriteriaSeries criteria_series(const Trajectory& traj, double kappa);

/// max over t <= T of the series divided by max over t <= T/2; 1 when both are 0.
double growth_ratio(const NormSeries& series);

/// Finite-horizon surrogates for the three scattering characterizations:
/// (i) L^inf decay near t^{-1/3} and a settled S-norm, (ii) bounded
/// ||V(-t)u||_{H^{0,1}}, (iii) bounded <t>^kappa ||u||_{L^{2(2 alpha + 1)}} and settled S-norm.
CriteriaReport evaluate_criteria(const Trajectory& traj, const CriteriaOptions& opts = {});

/// sqrt(||u||^2 + ||J(t)u||^2), equal to ||<x> V(-t) u||.
double weighted_norm_via_J(const RealField& u, double t);
/// ||<x> V(-t) u|| computed by conjugation.
double weighted_norm_conjugated(const RealField& u, double t);

struct AsymptoticState {
  RealField u_plus;
  /// ||V(-t)u(t) - u_plus|| in the H^1 and H^{0,1} surrogate norm.
  NormSeries convergence;
};

/// u_plus = V(-T)u(T) at the last slice. Throws UnsupportedError on blow-up.
AsymptoticState extract_asymptotic_state(const Trajectory& traj);

/// Convergence value near T/10 divided by the value near T/2.
double convergence_factor(const NormSeries& convergence);

struct SweepRow {
  double amplitude = 0.0;
  CriteriaReport report;
  /// Some verdict differs from the previous row.
  bool flip = false;
};

using DataFamily = std::function<RealField(double amplitude)>;

/// One evolution and report per amplitude; members run concurrently on up to
/// `workers` threads (0 = hardware concurrency) and rows come back in amplitude order.
std::vector<SweepRow> amplitude_sweep(const DataFamily& family, const std::vector<double>& amplitudes,
                                      const ModelParams& params, const StepperConfig& cfg, double T,
                                      const CriteriaOptions& opts = {}, std::size_t store_stride = 0,
                                      unsigned workers = 0);

}  // namespace gkdv
