#include "gkdv/scattering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "gkdv/vector_fields.hpp"

namespace gkdv {

double kappa_threshold(double alpha) {
  if (!(alpha > 1.0)) throw DomainError("kappa threshold needs alpha > 1");
  return alpha / (3.0 * (alpha - 1.0) * (2.0 * alpha + 1.0));
}

double kappa_step_constant(double alpha) { return alpha / (3.0 * (2.0 * alpha + 1.0)); }

double kappa_exit_target(double alpha) { return 1.0 / (2.0 * alpha + 1.0); }

double kappa_scattering_rate(double alpha) { return 2.0 * alpha / (3.0 * (2.0 * alpha + 1.0)); }

double kappa_replacement(double alpha) {
  return 0.5 * (1.0 / (2.0 * alpha + 1.0) + (alpha + 3.0) / (3.0 * alpha * (2.0 * alpha + 1.0)));
}

double kappa_default(double alpha) { return 0.5 * (kappa_threshold(alpha) + kappa_scattering_rate(alpha)); }

KappaIteration kappa_iterate(double alpha, double kappa0) {
  const double threshold = kappa_threshold(alpha);
  if (!(kappa0 > threshold)) {
    throw NonConvergentError("kappa0 = " + std::to_string(kappa0) + " does not exceed the threshold " +
                             std::to_string(threshold));
  }
  KappaIteration it;
  it.alpha = alpha;
  it.kappa0 = kappa0;
  it.step_constant = kappa_step_constant(alpha);
  const double target = kappa_exit_target(alpha);
  const double gap = (alpha - 1.0) * (kappa0 - threshold);
  const auto bound = static_cast<std::size_t>(std::ceil(std::max(0.0, target - kappa0) / gap)) + 2;

  double k = kappa0;
  if (k == target) {
    k = kappa_replacement(alpha);
    it.replacement_applied = true;
  }
  it.sequence.push_back(k);
  while (k <= target) {
    k = alpha * k - it.step_constant;
    if (k == target && !it.replacement_applied) {
      k = kappa_replacement(alpha);
      it.replacement_applied = true;
    }
    it.sequence.push_back(k);
    if (it.sequence.size() > bound + 2) {
      throw NonConvergentError("kappa iteration exceeded its step bound");
    }
  }
  it.j0 = it.sequence.size() - 1;
  return it;
}

double weighted_norm_via_J(const RealField& u, double t) {
  const double a = lebesgue(u, 2.0);
  const double b = lebesgue(apply_J_local(u, t), 2.0);
  return std::sqrt(a * a + b * b);
}

double weighted_norm_conjugated(const RealField& u, double t) { return weighted_h01(airy_propagate(u, -t)); }

CriteriaSeries criteria_series(const Trajectory& traj, double kappa) {
  CriteriaSeries out{{{}, {}, "weighted"}, {{}, {}, "kappa_weighted"}, {{}, {}, "linf"}};
  const double p = 2.0 * (2.0 * traj.params().alpha + 1.0);
  for (const SimState& s : traj.slices()) {
    const double w = std::sqrt(1.0 + s.t * s.t);
    out.weighted.times.push_back(s.t);
    out.weighted.values.push_back(weighted_norm_via_J(s.u, s.t));
    out.kappa_weighted.times.push_back(s.t);
    out.kappa_weighted.values.push_back(std::pow(w, kappa) * lebesgue(s.u, p));
    out.linf.times.push_back(s.t);
    out.linf.values.push_back(lebesgue(s.u, kInf));
  }
  return out;
}

double growth_ratio(const NormSeries& series) {
  if (series.times.empty()) return 1.0;
  const double half = series.times.front() + 0.5 * (series.times.back() - series.times.front());
  double full_max = 0.0;
  double half_max = 0.0;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    full_max = std::max(full_max, series.values[i]);
    if (series.times[i] <= half * (1.0 + 1e-12)) half_max = std::max(half_max, series.values[i]);
  }
  if (full_max == 0.0) return 1.0;
  if (half_max == 0.0) return std::numeric_limits<double>::infinity();
  return full_max / half_max;
}

namespace {

bool all_zero(const Trajectory& traj) {
  for (const SimState& s : traj.slices()) {
    if (s.u.max_abs() != 0.0) return false;
  }
  return true;
}

DecayFit fit_with_fallback(const NormSeries& linf, double start) {
  const double T = linf.times.back();
  try {
    return decay_fit(linf, {start, T});
  } catch (const Error&) {
    return decay_fit(linf, {std::max(1.0, 0.5 * T), T});
  }
}

}  // namespace

CriteriaReport evaluate_criteria(const Trajectory& traj, const CriteriaOptions& opts) {
  if (traj.empty()) throw DomainError("trajectory has no slices");
  const ModelParams& params = traj.params();
  CriteriaReport r;
  r.slices = traj.size();
  r.t_final = traj.back().t;
  r.kappa_used = std::isnan(opts.kappa) ? kappa_default(params.alpha) : opts.kappa;
  r.blowup_flag = traj.blowup();
  r.blowup_reason = traj.blowup_reason();
  for (const SimState& s : traj.slices()) r.max_boundary_mass = std::max(r.max_boundary_mass, s.boundary_mass_fraction);
  r.boundary_advisory = r.max_boundary_mass > kBoundaryMassAdvisory;

  const CriteriaSeries series = criteria_series(traj, r.kappa_used);
  r.initial_weighted = series.weighted.values.front();
  r.sup_weighted = *std::max_element(series.weighted.values.begin(), series.weighted.values.end());
  r.sup_kappa_weighted =
      *std::max_element(series.kappa_weighted.values.begin(), series.kappa_weighted.values.end());
  r.weighted_growth = growth_ratio(series.weighted);
  r.kappa_growth = growth_ratio(series.kappa_weighted);

  if (r.blowup_flag) return r;

  if (all_zero(traj)) {
    r.weighted_growth = r.kappa_growth = r.s_norm_growth = 1.0;
    r.verdict_i = r.verdict_ii = r.verdict_iii = true;
    return r;
  }

  const double t0 = traj.front().t;
  const double T = traj.back().t;
  r.s_norm_total = s_norm(traj, {t0, T});
  const double s_half = s_norm(traj, {t0, t0 + 0.5 * (T - t0)});
  r.s_norm_growth = s_half > 0.0 ? r.s_norm_total / s_half : 1.0;

  try {
    const DecayFit fit = fit_with_fallback(series.linf, opts.fit_start);
    r.linf_decay_exponent = fit.exponent;
    r.linf_decay_r2 = fit.r2;
  } catch (const Error&) {
  }

  const bool s_settled = std::isfinite(r.s_norm_total) && r.s_norm_growth <= opts.theta_decay;
  const bool decays = std::isfinite(r.linf_decay_exponent) &&
                      std::abs(r.linf_decay_exponent + 1.0 / 3.0) <= opts.decay_tolerance;
  r.verdict_i = decays && s_settled;
  r.verdict_ii = r.weighted_growth <= opts.theta;
  r.verdict_iii = r.kappa_growth <= opts.theta_decay && s_settled;
  return r;
}

AsymptoticState extract_asymptotic_state(const Trajectory& traj) {
  if (traj.blowup()) throw UnsupportedError("blow-up trajectory has no asymptotic state");
  if (traj.empty()) throw DomainError("trajectory has no slices");
  const double T = traj.back().t;
  AsymptoticState out{airy_propagate(traj.back().u, -T), {{}, {}, "convergence"}};
  for (const SimState& s : traj.slices()) {
    // V(-t)u(t) - u_plus = V(-t) w with w = u(t) - V(t) u_plus; the H^1 part is
    // invariant under V and ||x V(-t) w|| = ||J(t) w||.
    const RealField w = s.u - airy_propagate(out.u_plus, s.t);
    const double h1 = sobolev_h1(w);
    const double xw = lebesgue(apply_J_local(w, s.t), 2.0);
    out.convergence.times.push_back(s.t);
    out.convergence.values.push_back(std::sqrt(h1 * h1 + xw * xw));
  }
  return out;
}

double convergence_factor(const NormSeries& convergence) {
  if (convergence.times.size() < 2) throw InsufficientPointsError("convergence series is too short");
  const double t0 = convergence.times.front();
  const double T = convergence.times.back();
  auto nearest = [&](double t) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < convergence.times.size(); ++i) {
      if (std::abs(convergence.times[i] - t) < std::abs(convergence.times[best] - t)) best = i;
    }
    return convergence.values[best];
  };
  const double early = nearest(t0 + 0.1 * (T - t0));
  const double late = nearest(t0 + 0.5 * (T - t0));
  if (late == 0.0) return early == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return early / late;
}

std::vector<SweepRow> amplitude_sweep(const DataFamily& family, const std::vector<double>& amplitudes,
                                      const ModelParams& params, const StepperConfig& cfg, double T,
                                      const CriteriaOptions& opts, std::size_t store_stride, unsigned workers) {
  for (std::size_t i = 1; i < amplitudes.size(); ++i) {
    if (!(amplitudes[i] > amplitudes[i - 1])) throw DomainError("sweep amplitudes must increase strictly");
  }
  std::vector<SweepRow> rows(amplitudes.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < amplitudes.size(); i = next++) {
      SweepRow& row = rows[i];
      row.amplitude = amplitudes[i];
      try {
        const Trajectory traj = evolve(family(amplitudes[i]), params, cfg, T, store_stride);
        row.report = evaluate_criteria(traj, opts);
      } catch (const Error& e) {
        row.report = CriteriaReport{};
        row.report.blowup_flag = true;
        row.report.blowup_reason = e.what();
      }
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(amplitudes.size(), 1)));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const CriteriaReport& a = rows[i - 1].report;
    const CriteriaReport& b = rows[i].report;
    rows[i].flip = a.verdict_i != b.verdict_i || a.verdict_ii != b.verdict_ii ||
                   a.verdict_iii != b.verdict_iii || a.blowup_flag != b.blowup_flag;
  }
  return rows;
}

}  // namespace gkdv
