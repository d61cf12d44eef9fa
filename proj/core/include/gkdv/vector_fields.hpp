#pragma once

#include <cstddef>
#include <optional>

#include "gkdv/evolve.hpp"
#include "gkdv/spectral.hpp"

namespace gkdv {

/// J(t)u = x u - 3t u_xx.
RealField apply_J_local(const RealField& u, double t);
/// J(t)u = V(t) x V(-t) u.
RealField apply_J_conjugated(const RealField& u, double t);

/// v = J(t)u + 3 mu t |u|^{2 alpha} u.
RealField compute_v(const RealField& u, double t, const ModelParams& params);
/// Pu = x u_x + 3t u_t with u_t taken from the equation.
RealField compute_Pu(const RealField& u, double t, const ModelParams& params, int oversample = 2);

/// ||d_x v - Pu - u|| / max(||Pu||, 1e-14).
double identity_residual_Puv(const RealField& u, double t, const ModelParams& params, int oversample = 2);

/// Residuals of the evolution equations for v, Ju and Pu at interior slice i,
/// with the time derivative taken as a centered difference of stored slices:
///   ||L F - R|| / (||R|| + ||d_x^3 F|| + 1e-14),  L = d_t + d_x^3.
/// Throws UnsupportedError for endpoint indices or non-uniform storage.
double v_equation_residual(const Trajectory& traj, std::size_t i);
double Ju_equation_residual(const Trajectory& traj, std::size_t i);
double Pu_equation_residual(const Trajectory& traj, std::size_t i);

struct VectorFieldSlice {
  double t = 0.0;
  RealField Ju;
  RealField v;
  RealField Pu;
  double residual_Puv = 0.0;
  /// Empty at the first and last slice, where no centered difference exists.
  std::optional<double> residual_v_eq;
  std::optional<double> residual_Ju_eq;
  std::optional<double> residual_Pu_eq;
};

VectorFieldSlice vector_field_slice(const Trajectory& traj, std::size_t i);

}  // namespace gkdv
