#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gkdv/evolve.hpp"
#include "gkdv/spectral.hpp"

namespace gkdv {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// ||u||_{L^p}, p in [1, inf]; p = inf is the grid maximum.
double lebesgue(const RealField& u, double p);
/// sqrt(||u||^2 + ||u_x||^2).
double sobolev_h1(const RealField& u);
/// ||sqrt(1 + x^2) u||_{L^2}.
double weighted_h01(const RealField& u);

/// 1/2 ||u||^2.
double mass(const RealField& u);
/// 1/2 ||u_x||^2 + mu/(2 alpha + 2) ||u||_{2 alpha + 2}^{2 alpha + 2}.
double energy(const RealField& u, const ModelParams& params);

/// ||u_hat||_{L^{r'}(d xi)} with 1/r + 1/r' = 1, r in [1, inf].
double fourier_lebesgue(const RealField& u, double r);

/// L_x^p L_t^q with x outer and t inner, optionally after |D_x|^s.
struct MixedNormSpec {
  double p_outer_x = 2.0;
  double q_inner_t = 2.0;
  double s = 0.0;

  void validate() const;
};

struct TimeInterval {
  double t0 = 0.0;
  double t1 = kInf;

  bool contains(double t) const noexcept;
};

/// Time quadrature by trapezoid weights over the slices inside I; fewer than
/// 8 slices raises ResolutionError.
double mixed_norm(const Trajectory& traj, const MixedNormSpec& spec, TimeInterval I = {});

/// L_x^{5 alpha/2} L_t^{5 alpha}.
MixedNormSpec s_norm_spec(double alpha);
/// |D_x|^s with s = 3/4 - 1/(2 alpha) in L_x^{20 alpha/(10 - 3 alpha)} L_t^{10/3}.
MixedNormSpec x_norm_spec(double alpha);
double s_norm(const Trajectory& traj, TimeInterval I = {});
double x_norm(const Trajectory& traj, const ModelParams& params, TimeInterval I = {});

struct StrichartzExponents {
  double s;
  double r;
  /// True for the endpoint pairs (4, inf) and (inf, 2), which sit on the
  /// boundary of the admissible region.
  bool boundary;
};

/// (s, r) with 1/r = 2/p + 1/q and s = -1/p + 2/q for 0 <= 1/p < 1/4 and
/// 0 <= 1/q < 1/2 - 1/p; empty otherwise.
std::optional<StrichartzExponents> strichartz_admissible(double p, double q);

struct StrichartzSample {
  StrichartzExponents exponents;
  std::vector<double> ratios;
  double max = 0.0;
  double median = 0.0;
};

/// Ratio || |D_x|^s V(t) f ||_{L_x^p L_t^q(I)} / ||f||_{hat L^r} for every datum,
/// with V(t) f evaluated exactly on times t0, t0 + dt, ..., t1.
/// Throws InvalidExponentError for non-admissible (p, q).
StrichartzSample strichartz_ratio_sample(const std::vector<RealField>& data, double p, double q,
                                         TimeInterval I, double dt);

/// Exponent -1/3 + 2/(3p) of |t| in the Klainerman-Sobolev bound.
double klainerman_sobolev_exponent(double p);

/// ||u||_{L^p} / (|t|^{-1/3 + 2/(3p)} ||u||^{1/2 + 1/p} ||Ju||^{1/2 - 1/p}).
double klainerman_sobolev_ratio(const RealField& u, const RealField& Ju, double t, double p);

struct NormSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::string label;

  void validate() const;
};

struct DecayFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Least-squares line through (log t, log value) for the samples with t in the
/// window. Needs t >= 1, positive values and at least 10 points.
DecayFit decay_fit(const NormSeries& series, TimeInterval window = {5.0, kInf});

}  // namespace gkdv
