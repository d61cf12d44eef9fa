#include "gkdv/vector_fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gkdv {
namespace {

constexpr double kFloor = 1e-14;

double l2(const RealField& u) { return std::sqrt(inner_product(u, u)); }

RealField weight(const RealField& u, double alpha) {
  RealField out(u.grid());
  for (std::size_t j = 0; j < u.size(); ++j) out[j] = std::pow(u[j] * u[j], alpha);
  return out;
}

void require_interior(const Trajectory& traj, std::size_t i) {
  if (i == 0 || i + 1 >= traj.size()) {
    throw UnsupportedError("slice " + std::to_string(i) + " has no centered time difference");
  }
  if (!traj.uniform()) throw UnsupportedError("residuals need uniformly spaced slices");
}

struct Centered {
  RealField value;
  RealField dt;
};

// F at slice i together with (F_{i+1} - F_{i-1}) / (t_{i+1} - t_{i-1}).
template <class F>
Centered centered(const Trajectory& traj, std::size_t i, F&& f) {
  const SimState& prev = traj[i - 1];
  const SimState& next = traj[i + 1];
  RealField d = f(next.u, next.t) - f(prev.u, prev.t);
  d *= 1.0 / (next.t - prev.t);
  return {f(traj[i].u, traj[i].t), std::move(d)};
}

double normalized(const RealField& lhs, const RealField& rhs, const RealField& d3) {
  return l2(lhs - rhs) / (l2(rhs) + l2(d3) + kFloor);
}

}  // namespace

RealField apply_J_local(const RealField& u, double t) {
  RealField out = multiply_by_x(u);
  if (t != 0.0) out -= (3.0 * t) * derivative(u, 2);
  return out;
}

RealField apply_J_conjugated(const RealField& u, double t) {
  if (t == 0.0) return multiply_by_x(u);
  return airy_propagate(multiply_by_x(airy_propagate(u, -t)), t);
}

RealField compute_v(const RealField& u, double t, const ModelParams& params) {
  RealField v = apply_J_local(u, t);
  if (t != 0.0) v += (3.0 * params.mu * t) * power_nonlinearity(u, params.alpha);
  return v;
}

RealField compute_Pu(const RealField& u, double t, const ModelParams& params, int oversample) {
  RealField out = multiply_by_x(derivative(u, 1));
  if (t != 0.0) out += (3.0 * t) * rhs_time_derivative(u, params, oversample);
  return out;
}

double identity_residual_Puv(const RealField& u, double t, const ModelParams& params, int oversample) {
  const RealField pu = compute_Pu(u, t, params, oversample);
  const RealField r = derivative(compute_v(u, t, params), 1) - pu - u;
  return l2(r) / std::max(l2(pu), kFloor);
}

double v_equation_residual(const Trajectory& traj, std::size_t i) {
  require_interior(traj, i);
  const ModelParams& p = traj.params();
  const Centered v = centered(traj, i, [&](const RealField& u, double t) { return compute_v(u, t, p); });
  const RealField& u = traj[i].u;
  const RealField d3 = derivative(v.value, 3);
  const RealField rhs = ((2.0 * p.alpha + 1.0) * p.mu) * hadamard(weight(u, p.alpha), derivative(v.value, 1)) -
                        (2.0 * (p.alpha - 1.0) * p.mu) * power_nonlinearity(u, p.alpha);
  return normalized(v.dt + d3, rhs, d3);
}

double Ju_equation_residual(const Trajectory& traj, std::size_t i) {
  require_interior(traj, i);
  const ModelParams& p = traj.params();
  const int over = traj.oversample();
  const Centered ju = centered(traj, i, [](const RealField& u, double t) { return apply_J_local(u, t); });
  const Centered nl =
      centered(traj, i, [&](const RealField& u, double) { return power_nonlinearity(u, p.alpha); });
  const RealField& u = traj[i].u;
  const double t = traj[i].t;
  const RealField d3 = derivative(ju.value, 3);
  const RealField rhs =
      ((2.0 * p.alpha + 1.0) * p.mu) * hadamard(weight(u, p.alpha), compute_Pu(u, t, p, over)) -
      (3.0 * p.mu * t) * (nl.dt + derivative(nl.value, 3));
  return normalized(ju.dt + d3, rhs, d3);
}

double Pu_equation_residual(const Trajectory& traj, std::size_t i) {
  require_interior(traj, i);
  const ModelParams& p = traj.params();
  const int over = traj.oversample();
  const Centered pu =
      centered(traj, i, [&](const RealField& u, double t) { return compute_Pu(u, t, p, over); });
  const RealField& u = traj[i].u;
  const RealField d3 = derivative(pu.value, 3);
  const RealField rhs =
      ((2.0 * p.alpha + 1.0) * p.mu) * derivative(hadamard(weight(u, p.alpha), pu.value), 1) +
      (2.0 * p.mu) * derivative(power_nonlinearity(u, p.alpha), 1);
  return normalized(pu.dt + d3, rhs, d3);
}

VectorFieldSlice vector_field_slice(const Trajectory& traj, std::size_t i) {
  const SimState& s = traj[i];
  const ModelParams& p = traj.params();
  VectorFieldSlice out{s.t,
                       apply_J_local(s.u, s.t),
                       compute_v(s.u, s.t, p),
                       compute_Pu(s.u, s.t, p, traj.oversample()),
                       identity_residual_Puv(s.u, s.t, p, traj.oversample()),
                       {},
                       {},
                       {}};
  if (i > 0 && i + 1 < traj.size() && traj.uniform()) {
    out.residual_v_eq = v_equation_residual(traj, i);
    out.residual_Ju_eq = Ju_equation_residual(traj, i);
    out.residual_Pu_eq = Pu_equation_residual(traj, i);
  }
  return out;
}

}  // namespace gkdv
