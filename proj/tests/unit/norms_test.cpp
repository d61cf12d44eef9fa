#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gkdv/error.hpp"
#include "gkdv/evolve.hpp"
#include "gkdv/norms.hpp"
#include "gkdv/spectral.hpp"
#include "gkdv/vector_fields.hpp"

using namespace gkdv;

namespace {

constexpr double kPi = std::numbers::pi;
const ModelParams kParams{1.0, 1.8};

Trajectory static_trajectory(const RealField& g, double T, std::size_t slices) {
  Trajectory t(kParams, g.grid(), T / static_cast<double>(slices), 1);
  for (std::size_t i = 0; i <= slices; ++i) t.push_back(make_state(T * static_cast<double>(i) / static_cast<double>(slices), g));
  return t;
}

Trajectory free_trajectory(const RealField& f, double T, double h) {
  const auto steps = static_cast<std::size_t>(std::llround(T / h));
  Trajectory t(kParams, f.grid(), h, 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double time = h * static_cast<double>(i);
    t.push_back(make_state(time, airy_propagate(f, time)));
  }
  return t;
}

}  // namespace

TEST(Lebesgue, ZeroAndGaussianOracles) {
  const GridSpec g(1024, 64.0);
  const RealField z(g);
  EXPECT_EQ(lebesgue(z, 2.0), 0.0);
  EXPECT_EQ(sobolev_h1(z), 0.0);
  EXPECT_EQ(weighted_h01(z), 0.0);
  const RealField u = make_gaussian(g, 1.0, 0.0, 1.0);
  EXPECT_NEAR(std::pow(lebesgue(u, 2.0), 2), std::sqrt(kPi / 2.0), 1e-12);
  EXPECT_NEAR(mass(u), 0.626657, 1e-6);
  EXPECT_NEAR(std::pow(weighted_h01(u), 2), std::sqrt(kPi / 2.0) * 1.25, 1e-12);
  EXPECT_NEAR(std::pow(weighted_h01(u), 2), 1.566643, 1e-6);
  EXPECT_EQ(lebesgue(u, kInf), 1.0);
  // ||e^{-x^2}||_1 = sqrt(pi)
  EXPECT_NEAR(lebesgue(u, 1.0), std::sqrt(kPi), 1e-12);
  // ||u_x||^2 = sqrt(pi/2)
  EXPECT_NEAR(std::pow(sobolev_h1(u), 2), 2.0 * std::sqrt(kPi / 2.0), 1e-12);
  EXPECT_THROW(lebesgue(u, 0.5), InvalidExponentError);
}

TEST(Energy, SignAndQuadratureOracle) {
  const GridSpec g(1024, 64.0);
  EXPECT_EQ(energy(RealField(g), kParams), 0.0);
  EXPECT_LT(energy(make_gaussian(g, 3.0, 0.0, 1.0), ModelParams{-1.0, 1.8}), 0.0);
  // Oracle: fine trapezoid of the closed-form integrand on [-12, 12].
  const int m = 2000000;
  const double h = 24.0 / m;
  double kin = 0.0, pot = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double x = -12.0 + i * h;
    const double w = (i == 0 || i == m) ? 0.5 : 1.0;
    const double u = std::exp(-x * x);
    kin += w * 4.0 * x * x * u * u;
    pot += w * std::pow(u, 5.6);
  }
  const double expected = 0.5 * kin * h + pot * h / 5.6;
  EXPECT_NEAR(energy(make_gaussian(g, 1.0, 0.0, 1.0), kParams), expected, 1e-8);
}

TEST(FourierLebesgue, PlancherelZeroAndGaussian) {
  const GridSpec g(1024, 64.0);
  EXPECT_EQ(fourier_lebesgue(RealField(g), 1.8), 0.0);
  const RealField u = make_gaussian(g, 1.0, 0.0, 1.0);
  EXPECT_NEAR(fourier_lebesgue(u, 2.0), lebesgue(u, 2.0), 1e-12 * lebesgue(u, 2.0));
  // int (2^{-1/2} e^{-xi^2/4})^{r'} d xi = 2^{-r'/2} sqrt(4 pi / r'), r' = 2.25
  const double rp = 2.25;
  const double expected = std::pow(std::pow(2.0, -rp / 2.0) * std::sqrt(4.0 * kPi / rp), 1.0 / rp);
  EXPECT_NEAR(fourier_lebesgue(u, 1.8), expected, 1e-8);
  EXPECT_THROW(fourier_lebesgue(u, 0.9), InvalidExponentError);
}

TEST(MixedNorm, ExponentsAndZero) {
  const MixedNormSpec s = s_norm_spec(1.8);
  EXPECT_NEAR(s.p_outer_x, 4.5, 1e-15);
  EXPECT_NEAR(s.q_inner_t, 9.0, 1e-15);
  const MixedNormSpec x = x_norm_spec(1.8);
  EXPECT_NEAR(x.s, 0.4722222222, 1e-9);
  EXPECT_NEAR(x.p_outer_x, 7.826087, 1e-6);
  EXPECT_NEAR(x.q_inner_t, 10.0 / 3.0, 1e-15);
  const GridSpec g(256, 32.0);
  const Trajectory z = static_trajectory(RealField(g), 1.0, 20);
  EXPECT_EQ(mixed_norm(z, s), 0.0);
  EXPECT_EQ(x_norm(z, kParams), 0.0);
}

TEST(MixedNorm, SeparableClosedForm) {
  const GridSpec g(1024, 64.0);
  const RealField u = make_gaussian(g, 1.0, 0.0, 1.0);
  const Trajectory t = static_trajectory(u, 3.0, 30);
  const MixedNormSpec spec{4.5, 9.0, 0.0};
  EXPECT_NEAR(mixed_norm(t, spec), lebesgue(u, 4.5) * std::pow(3.0, 1.0 / 9.0), 1e-6);
  const MixedNormSpec linf{kInf, kInf, 0.0};
  EXPECT_EQ(mixed_norm(t, linf), 1.0);
}

TEST(MixedNorm, EqualExponentsMatchSpaceTimeNorm) {
  const GridSpec g(512, 64.0);
  const Trajectory t = free_trajectory(make_gaussian(g, 1.0, 0.0, 1.0), 2.0, 0.05);
  const double p = 3.0;
  const std::vector<double> w = t.quadrature_weights();
  double direct = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (double v : t[i].u.samples()) direct += w[i] * g.dx() * std::pow(std::abs(v), p);
  }
  EXPECT_NEAR(mixed_norm(t, {p, p, 0.0}), std::pow(direct, 1.0 / p), 1e-12);
}

TEST(MixedNorm, MonotoneInInterval) {
  const GridSpec g(512, 64.0);
  const Trajectory t = free_trajectory(make_gaussian(g, 1.0, 0.0, 1.0), 4.0, 0.05);
  const MixedNormSpec s = s_norm_spec(1.8);
  double prev = 0.0;
  for (double end : {1.0, 2.0, 3.0, 4.0}) {
    const double v = mixed_norm(t, s, {0.0, end});
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(MixedNorm, TooFewSlices) {
  const GridSpec g(128, 16.0);
  const Trajectory t = static_trajectory(make_gaussian(g, 1.0, 0.0, 1.0), 1.0, 5);
  EXPECT_THROW(mixed_norm(t, s_norm_spec(1.8)), ResolutionError);
}

TEST(XNorm, FreeFlowStableUnderStrideHalving) {
  const GridSpec g(2048, 512.0);
  const RealField f = make_gaussian(g, 0.5, 0.0, 1.0);
  const Trajectory fine = free_trajectory(f, 10.0, 0.025);
  const Trajectory coarse = fine.subsample(2);
  const double a = x_norm(fine, kParams, {0.0, 10.0});
  const double b = x_norm(coarse, kParams, {0.0, 10.0});
  EXPECT_TRUE(std::isfinite(a));
  EXPECT_LT(std::abs(a / b - 1.0), 0.02);
}

TEST(StrichartzAdmissible, EndpointPairs) {
  const auto a = strichartz_admissible(4.0, kInf);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->s, -0.25);
  EXPECT_EQ(a->r, 2.0);
  EXPECT_TRUE(a->boundary);
  const auto b = strichartz_admissible(kInf, 2.0);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->s, 1.0);
  EXPECT_EQ(b->r, 2.0);
  EXPECT_TRUE(b->boundary);
  EXPECT_FALSE(strichartz_admissible(2.0, 2.0));
  EXPECT_FALSE(strichartz_admissible(4.0, 4.0));
  EXPECT_FALSE(strichartz_admissible(8.0, 2.0));
}

TEST(StrichartzAdmissible, ScalingRelationsOnInterior) {
  for (double p : {5.0, 8.0, 20.0, 100.0, kInf}) {
    for (double q : {2.5, 4.0, 10.0, kInf}) {
      const auto e = strichartz_admissible(p, q);
      const double ip = std::isinf(p) ? 0.0 : 1.0 / p, iq = std::isinf(q) ? 0.0 : 1.0 / q;
      const bool interior = ip < 0.25 && iq < 0.5 - ip;
      ASSERT_EQ(e.has_value(), interior) << p << "," << q;
      if (!e) continue;
      EXPECT_FALSE(e->boundary);
      EXPECT_NEAR(1.0 / e->r, 2.0 * ip + iq, 1e-15);
      EXPECT_NEAR(e->s, -ip + 2.0 * iq, 1e-15);
      // |D|^s V(t) f_lambda scales like lambda^{s - 3/q - 1/p} = lambda^{-1/r}
      EXPECT_NEAR(e->s - 3.0 * iq - ip, -1.0 / e->r, 1e-15);
    }
  }
}

TEST(StrichartzSample, SingleGaussianPositiveFinite) {
  const GridSpec g(1024, 256.0);
  const StrichartzSample s = strichartz_ratio_sample({make_gaussian(g, 1.0, 0.0, 1.0)}, 4.0, kInf, {0.0, 2.0}, 0.02);
  ASSERT_EQ(s.ratios.size(), 1u);
  EXPECT_GT(s.ratios[0], 0.0);
  EXPECT_TRUE(std::isfinite(s.ratios[0]));
  EXPECT_THROW(strichartz_ratio_sample({make_gaussian(g, 1.0, 0.0, 1.0)}, 2.0, 2.0, {0.0, 2.0}, 0.02),
               InvalidExponentError);
}

TEST(StrichartzSample, DilationFamilyDrift) {
  // Window scaled by lambda^{-3} so that only the grid breaks the exact invariance.
  const GridSpec g(16384, 1024.0);
  std::vector<double> ratios;
  for (double lambda : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const RealField f = make_gaussian(g, 1.0, 0.0, 1.0 / lambda);
    const double T = 2.0 / (lambda * lambda * lambda);
    ratios.push_back(strichartz_ratio_sample({f}, 4.0, kInf, {0.0, T}, T / 400.0).max);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  EXPECT_LT(*hi / *lo - 1.0, 0.15);
}

TEST(KlainermanSobolev, ExponentCollapseAndArithmetic) {
  const GridSpec g(1024, 256.0);
  const RealField u = airy_propagate(make_gaussian(g, 1.0, 0.0, 1.0), 1.5);
  EXPECT_NEAR(klainerman_sobolev_ratio(u, apply_J_local(u, 1.5), 1.5, 2.0), 1.0, 1e-12);
  EXPECT_NEAR(klainerman_sobolev_exponent(9.2), -0.260870, 1e-6);
  EXPECT_NEAR(-klainerman_sobolev_exponent(2.0 * (2.0 * 1.8 + 1.0)), 2.0 * 1.8 / (3.0 * (2.0 * 1.8 + 1.0)), 1e-15);
  EXPECT_THROW(klainerman_sobolev_ratio(u, u, 0.0, 4.0), SingularTimeError);
  EXPECT_THROW(klainerman_sobolev_ratio(u, u, 1.0, 1.5), InvalidExponentError);
}

TEST(KlainermanSobolev, FreeFlowSupFinite) {
  const GridSpec g(8192, 2048.0);
  const RealField f = make_gaussian(g, 1.0, 0.0, 1.0);
  double sup = 0.0;
  for (double t = 1.0; t <= 50.0; t += 1.0) {
    const RealField u = airy_propagate(f, t);
    sup = std::max(sup, klainerman_sobolev_ratio(u, apply_J_local(u, t), t, kInf));
  }
  EXPECT_TRUE(std::isfinite(sup));
  EXPECT_GT(sup, 0.0);
  EXPECT_LT(sup, 10.0);
}

TEST(DecayFit, RecoversPowerLaw) {
  NormSeries s{{}, {}, "synthetic"};
  for (int i = 0; i <= 100; ++i) {
    const double t = 5.0 + 0.45 * i;
    s.times.push_back(t);
    s.values.push_back(2.5 * std::pow(t, -1.0 / 3.0));
  }
  const DecayFit fit = decay_fit(s, {5.0, 50.0});
  EXPECT_NEAR(fit.exponent, -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(2.5), 1e-12);
  EXPECT_NEAR(fit.r2, 1.0, 1e-12);
}

TEST(DecayFit, Preconditions) {
  NormSeries s{{1, 2, 3}, {1, 1, 1}, "short"};
  EXPECT_THROW(decay_fit(s, {1.0, 3.0}), InsufficientPointsError);
  NormSeries early{{}, {}, "early"};
  for (int i = 0; i < 20; ++i) {
    early.times.push_back(0.1 * (i + 1));
    early.values.push_back(1.0);
  }
  EXPECT_THROW(decay_fit(early, {0.0, 2.0}), DomainError);
}

TEST(DecayFit, FreeAiryGaussian) {
  const GridSpec g(16384, 4096.0);
  const RealField f = make_gaussian(g, 1.0, 0.0, 1.0);
  NormSeries s{{}, {}, "linf"};
  for (double t = 5.0; t <= 50.0 + 1e-9; t += 0.5) {
    s.times.push_back(t);
    s.values.push_back(lebesgue(airy_propagate(f, t), kInf));
  }
  const DecayFit fit = decay_fit(s, {5.0, 50.0});
  EXPECT_GE(fit.exponent, -0.38);
  EXPECT_LE(fit.exponent, -0.29);
}
