#include "gkdv/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fft.hpp"

namespace gkdv {
namespace {

constexpr double kFloor = 1e-14;

void check_exponent(double p, const char* name) {
  if (std::isnan(p) || p < 1.0) {
    throw InvalidExponentError(std::string(name) + " must lie in [1, inf], got " + std::to_string(p));
  }
}

// sum |a_j|^p h, as a norm; p = inf gives the maximum.
double discrete_norm(std::span<const double> a, double p, double h) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (double v : a) s += std::pow(std::abs(v), p);
  return std::pow(s * h, 1.0 / p);
}

// |xi|^s for any s > -1. The xi = 0 cell carries the cell average of |xi|^s
// when s < 0, so the singular potential stays integrable.
void riesz_multiply(const GridSpec& g, std::span<Complex> c, double s) {
  if (s == 0.0) return;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (k == g.nyquist_index()) {
      c[k] = 0.0;
    } else if (k == 0) {
      c[k] *= s > 0.0 ? 0.0 : std::pow(0.5 * g.dxi(), s) / (1.0 + s);
    } else {
      c[k] *= std::pow(std::abs(g.xi(k)), s);
    }
  }
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

double lebesgue(const RealField& u, double p) {
  check_exponent(p, "p");
  return discrete_norm(u.samples(), p, u.grid().dx());
}

double sobolev_h1(const RealField& u) {
  const double a = lebesgue(u, 2.0);
  const double b = lebesgue(derivative(u, 1), 2.0);
  return std::sqrt(a * a + b * b);
}

double weighted_h01(const RealField& u) {
  const GridSpec& g = u.grid();
  double s = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) s += (1.0 + g.x(j) * g.x(j)) * u[j] * u[j];
  return std::sqrt(s * g.dx());
}

double mass(const RealField& u) { return 0.5 * inner_product(u, u); }

double energy(const RealField& u, const ModelParams& params) {
  const RealField ux = derivative(u, 1);
  const double q = 2.0 * params.alpha + 2.0;
  double pot = 0.0;
  for (double v : u.samples()) pot += std::pow(std::abs(v), q);
  pot *= u.grid().dx();
  return 0.5 * inner_product(ux, ux) + params.mu / q * pot;
}

double fourier_lebesgue(const RealField& u, double r) {
  check_exponent(r, "r");
  const double rp = std::isinf(r) ? 1.0 : (r == 1.0 ? kInf : r / (r - 1.0));
  const SpectralField f = forward_transform(u);
  std::vector<double> mod(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) mod[k] = std::abs(f[k]);
  return discrete_norm(mod, rp, u.grid().dxi());
}

void MixedNormSpec::validate() const {
  check_exponent(p_outer_x, "p_outer_x");
  check_exponent(q_inner_t, "q_inner_t");
  if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidExponentError("derivative order s must be >= 0");
}

bool TimeInterval::contains(double t) const noexcept {
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  return t >= t0 - tol && t <= t1 + tol;
}

double mixed_norm(const Trajectory& traj, const MixedNormSpec& spec, TimeInterval I) {
  spec.validate();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (I.contains(traj[i].t)) idx.push_back(i);
  }
  if (idx.size() < 8) {
    throw ResolutionError("mixed norm needs at least 8 slices in the interval, found " + std::to_string(idx.size()));
  }
  const GridSpec& g = traj.grid();
  const std::size_t n = g.size();
  const double q = spec.q_inner_t;
  std::vector<double> acc(n, 0.0);
  std::vector<Complex> c(n);
  RealField f(g);
  for (std::size_t m = 0; m < idx.size(); ++m) {
    double w = 0.0;
    if (m > 0) w += 0.5 * (traj[idx[m]].t - traj[idx[m - 1]].t);
    if (m + 1 < idx.size()) w += 0.5 * (traj[idx[m + 1]].t - traj[idx[m]].t);
    const RealField* u = &traj[idx[m]].u;
    if (spec.s != 0.0) {
      detail::to_spectral(g, u->samples(), c);
      riesz_multiply(g, c, spec.s);
      detail::to_physical(g, c, f.samples());
      u = &f;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double a = std::abs((*u)[j]);
      if (std::isinf(q)) {
        acc[j] = std::max(acc[j], a);
      } else {
        acc[j] += w * std::pow(a, q);
      }
    }
  }
  if (!std::isinf(q)) {
    for (double& a : acc) a = std::pow(a, 1.0 / q);
  }
  return discrete_norm(acc, spec.p_outer_x, g.dx());
}

MixedNormSpec s_norm_spec(double alpha) { return {2.5 * alpha, 5.0 * alpha, 0.0}; }

MixedNormSpec x_norm_spec(double alpha) {
  return {20.0 * alpha / (10.0 - 3.0 * alpha), 10.0 / 3.0, 0.75 - 0.5 / alpha};
}

double s_norm(const Trajectory& traj, TimeInterval I) {
  return mixed_norm(traj, s_norm_spec(traj.params().alpha), I);
}

double x_norm(const Trajectory& traj, const ModelParams& params, TimeInterval I) {
  return mixed_norm(traj, x_norm_spec(params.alpha), I);
}

std::optional<StrichartzExponents> strichartz_admissible(double p, double q) {
  if (std::isnan(p) || std::isnan(q) || p <= 0.0 || q <= 0.0) return std::nullopt;
  const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  const double ir = 2.0 * ip + iq;
  StrichartzExponents e{-ip + 2.0 * iq, 1.0 / ir, false};
  if (ip < 0.25 && iq < 0.5 - ip) return e;
  if ((p == 4.0 && std::isinf(q)) || (std::isinf(p) && q == 2.0)) {
    e.boundary = true;
    return e;
  }
  return std::nullopt;
}

StrichartzSample strichartz_ratio_sample(const std::vector<RealField>& data, double p, double q,
                                         TimeInterval I, double dt) {
  const auto ex = strichartz_admissible(p, q);
  if (!ex) throw InvalidExponentError("(p, q) is not Strichartz admissible");
  if (!(dt > 0.0) || !std::isfinite(I.t1) || !(I.t1 > I.t0)) {
    throw DomainError("Strichartz sampling needs a finite interval and dt > 0");
  }
  const auto steps = static_cast<std::size_t>(std::llround((I.t1 - I.t0) / dt));
  if (steps < 7) throw ResolutionError("Strichartz sampling needs at least 8 time samples");
  const double h = (I.t1 - I.t0) / static_cast<double>(steps);

  StrichartzSample out{*ex, {}, 0.0, 0.0};
  for (const RealField& f0 : data) {
    const GridSpec& g = f0.grid();
    const std::size_t n = g.size();
    std::vector<Complex> base(n), c(n);
    detail::to_spectral(g, f0.samples(), base);
    riesz_multiply(g, base, ex->s);
    std::vector<double> acc(n, 0.0), u(n);
    for (std::size_t m = 0; m <= steps; ++m) {
      const double t = I.t0 + static_cast<double>(m) * h;
      const double w = (m == 0 || m == steps) ? 0.5 * h : h;
      for (std::size_t k = 0; k < n; ++k) {
        const double xi = k == g.nyquist_index() ? 0.0 : g.xi(k);
        c[k] = base[k] * std::polar(1.0, t * xi * xi * xi);
      }
      detail::to_physical(g, c, u);
      for (std::size_t j = 0; j < n; ++j) {
        const double a = std::abs(u[j]);
        if (std::isinf(q)) {
          acc[j] = std::max(acc[j], a);
        } else {
          acc[j] += w * std::pow(a, q);
        }
      }
    }
    if (!std::isinf(q)) {
      for (double& a : acc) a = std::pow(a, 1.0 / q);
    }
    const double lhs = discrete_norm(acc, p, g.dx());
    const double rhs = fourier_lebesgue(f0, ex->r);
    out.ratios.push_back(lhs / std::max(rhs, kFloor));
  }
  if (!out.ratios.empty()) {
    out.max = *std::max_element(out.ratios.begin(), out.ratios.end());
    out.median = median_of(out.ratios);
  }
  return out;
}

double klainerman_sobolev_exponent(double p) {
  const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  return -1.0 / 3.0 + 2.0 / 3.0 * ip;
}

double klainerman_sobolev_ratio(const RealField& u, const RealField& Ju, double t, double p) {
  if (t == 0.0) throw SingularTimeError("Klainerman-Sobolev weight is singular at t = 0");
  if (std::isnan(p) || p < 2.0) throw InvalidExponentError("p must lie in [2, inf]");
  const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  const double l2u = lebesgue(u, 2.0);
  const double rhs = std::pow(std::abs(t), klainerman_sobolev_exponent(p)) * std::pow(l2u, 0.5 + ip) *
                     std::pow(lebesgue(Ju, 2.0), 0.5 - ip);
  return lebesgue(u, p) / std::max(rhs, kFloor);
}

void NormSeries::validate() const {
  if (times.size() != values.size()) throw DomainError("series '" + label + "' has mismatched lengths");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("series '" + label + "' times must increase");
    if (!std::isfinite(values[i])) throw DomainError("series '" + label + "' has non-finite values");
  }
}

DecayFit decay_fit(const NormSeries& series, TimeInterval window) {
  series.validate();
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    if (!window.contains(t)) continue;
    if (t < 1.0) throw DomainError("decay fit window must satisfy t >= 1");
    if (!(series.values[i] > 0.0)) throw DomainError("decay fit needs positive values");
    lx.push_back(std::log(t));
    ly.push_back(std::log(series.values[i]));
  }
  const std::size_t n = lx.size();
  if (n < 10) throw InsufficientPointsError("decay fit needs at least 10 points, found " + std::to_string(n));
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientPointsError("decay fit needs distinct times");
  DecayFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  fit.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  fit.points = n;
  return fit;
}

}  // namespace gkdv
