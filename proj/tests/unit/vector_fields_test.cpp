#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gkdv/error.hpp"
#include "gkdv/evolve.hpp"
#include "gkdv/norms.hpp"
#include "gkdv/spectral.hpp"
#include "gkdv/vector_fields.hpp"

using namespace gkdv;

namespace {

const ModelParams kParams{1.0, 1.8};

double rel_l2(const RealField& a, const RealField& b) {
  return lebesgue(a - b, 2.0) / lebesgue(b, 2.0);
}

// Small Gaussian on a box wide enough that nothing reaches the boundary by T = 2,
// stored every step of 0.0025; the default view keeps every second slice.
const Trajectory& standard_run() {
  static const Trajectory traj = [] {
    const GridSpec g(8192, 1024.0);
    StepperConfig c;
    c.dt = 0.0025;
    return evolve(make_gaussian(g, 0.5, 0.0, 2.0), kParams, c, 2.0, 1);
  }();
  return traj;
}

RealField wave_packet(const GridSpec& g, double amp, double xi0) {
  RealField u = make_gaussian(g, amp, 0.0, 4.0);
  for (std::size_t j = 0; j < g.size(); ++j) u[j] *= std::cos(xi0 * g.x(j));
  return u;
}

}  // namespace

TEST(ApplyJ, AtTimeZeroIsMultiplicationByX) {
  const GridSpec g(512, 64.0);
  const RealField u = make_gaussian(g, 1.0, 0.5, 1.0);
  const RealField xu = multiply_by_x(u);
  EXPECT_EQ(lebesgue(apply_J_local(u, 0.0) - xu, kInf), 0.0);
  EXPECT_EQ(lebesgue(apply_J_conjugated(u, 0.0) - xu, kInf), 0.0);
  EXPECT_EQ(apply_J_local(RealField(g), 1.0).max_abs(), 0.0);
  EXPECT_EQ(apply_J_conjugated(RealField(g), 1.0).max_abs(), 0.0);
}

// Airy tails of Gaussian data decay like exp(-|x|/(12 t)), so the boxes below
// are sized to keep the periodic wrap-around under roundoff.
TEST(ApplyJ, LocalAndConjugatedFormsAgree) {
  const GridSpec g(16384, 2048.0);
  EXPECT_LT(rel_l2(apply_J_local(make_gaussian(g, 1.0, 0.0, 1.0), 1.0),
                   apply_J_conjugated(make_gaussian(g, 1.0, 0.0, 1.0), 1.0)),
            1e-8);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  RealField u(g);
  for (int m = 0; m < 6; ++m) {
    RealField p = make_gaussian(g, unif(rng), 3.0 * unif(rng), 1.5);
    const double xi0 = 1.5 * (unif(rng) + 1.0);
    for (std::size_t j = 0; j < g.size(); ++j) p[j] *= std::cos(xi0 * g.x(j));
    u += p;
  }
  EXPECT_LT(rel_l2(apply_J_local(u, 2.5), apply_J_conjugated(u, 2.5)), 1e-8);
}

TEST(ApplyJ, FreeFlowCommutation) {
  const GridSpec g(32768, 8192.0);
  const RealField f = make_gaussian(g, 1.0, 0.0, 1.0);
  const RealField xf = multiply_by_x(f);
  for (double t : {0.5, 2.0, 10.0}) {
    const RealField lhs = apply_J_local(airy_propagate(f, t), t);
    EXPECT_LT(rel_l2(lhs, airy_propagate(xf, t)), 1e-8) << "t = " << t;
    EXPECT_NEAR(lebesgue(lhs, 2.0) / lebesgue(xf, 2.0), 1.0, 1e-8);
  }
}

TEST(ApplyJ, EvenDataGivesOddJu) {
  const GridSpec g(512, 64.0);
  const RealField ju = apply_J_local(make_gaussian(g, 1.0, 0.0, 1.0), 0.0);
  const std::size_t n = g.size();
  for (std::size_t j = 1; j < n / 2; ++j) EXPECT_NEAR(ju[n / 2 + j], -ju[n / 2 - j], 1e-15);
}

TEST(ComputeV, Definition) {
  const GridSpec g(1024, 64.0);
  const RealField u = make_gaussian(g, 0.5, 0.0, 1.0);
  EXPECT_EQ(lebesgue(compute_v(u, 0.0, kParams) - multiply_by_x(u), kInf), 0.0);
  EXPECT_EQ(compute_v(RealField(g), 1.0, kParams).max_abs(), 0.0);
}

TEST(ComputeV, MatchesRecomputationFromStoredSlice) {
  const GridSpec g(4096, 1024.0);
  StepperConfig c;
  c.dt = 0.05;
  const Trajectory t = evolve(make_gaussian(g, 0.5, 0.0, 1.0), kParams, c, 5.0, 10);
  const SimState& s = t.back();
  ASSERT_NEAR(s.t, 5.0, 1e-12);
  const RealField uxx = derivative(s.u, 2);
  RealField v(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double u = s.u[j];
    v[j] = g.x(j) * u - 3.0 * s.t * uxx[j] + 3.0 * s.t * std::pow(std::abs(u), 3.6) * u;
  }
  const double norm = lebesgue(compute_v(s.u, s.t, kParams), 2.0);
  EXPECT_TRUE(std::isfinite(norm));
  EXPECT_NEAR(norm, lebesgue(v, 2.0), 1e-10 * norm);
}

TEST(ComputePu, AtTimeZero) {
  const GridSpec g(512, 64.0);
  const RealField u = make_gaussian(g, 0.5, 0.0, 1.0);
  EXPECT_EQ(lebesgue(compute_Pu(u, 0.0, kParams) - multiply_by_x(derivative(u, 1)), kInf), 0.0);
  EXPECT_EQ(compute_Pu(RealField(g), 2.0, kParams).max_abs(), 0.0);
}

TEST(IdentityResidual, ZeroField) {
  const GridSpec g(512, 64.0);
  EXPECT_EQ(identity_residual_Puv(RealField(g), 1.0, kParams), 0.0);
}

TEST(IdentityResidual, WavePacketDecreasesUnderRefinement) {
  const double coarse = identity_residual_Puv(wave_packet(GridSpec(2048, 256.0), 0.3, 1.0), 1.0, kParams);
  const double fine = identity_residual_Puv(wave_packet(GridSpec(4096, 256.0), 0.3, 1.0), 1.0, kParams);
  EXPECT_LT(fine, 1e-8);
  EXPECT_LT(fine, coarse);
}

TEST(IdentityResidual, GaussianSliceAtTimeThree) {
  auto residual = [](std::size_t n) {
    StepperConfig c;
    c.dt = 0.01;
    const Trajectory t = evolve(make_gaussian(GridSpec(n, 2048.0), 0.5, 0.0, 2.0), kParams, c, 3.0, 100);
    const SimState& s = t.back();
    EXPECT_NEAR(s.t, 3.0, 1e-12);
    return identity_residual_Puv(s.u, s.t, kParams);
  };
  const double coarse = residual(16384), fine = residual(32768);
  EXPECT_LT(fine, 1e-6);
  EXPECT_LT(fine, coarse);
}

TEST(EquationResiduals, ZeroTrajectory) {
  const GridSpec g(256, 32.0);
  StepperConfig c;
  c.dt = 0.01;
  const Trajectory t = evolve(RealField(g), kParams, c, 0.1, 1);
  EXPECT_EQ(v_equation_residual(t, 5), 0.0);
  EXPECT_EQ(Ju_equation_residual(t, 5), 0.0);
  EXPECT_EQ(Pu_equation_residual(t, 5), 0.0);
}

TEST(EquationResiduals, EndpointsAndNonUniformStorageRejected) {
  const GridSpec g(256, 32.0);
  StepperConfig c;
  c.dt = 0.01;
  const Trajectory t = evolve(make_gaussian(g, 0.5, 0.0, 1.0), kParams, c, 0.1, 1);
  EXPECT_THROW(v_equation_residual(t, 0), UnsupportedError);
  EXPECT_THROW(Pu_equation_residual(t, t.size() - 1), UnsupportedError);
  Trajectory uneven(kParams, g, 0.01, 1);
  for (double time : {0.0, 0.01, 0.03, 0.04}) uneven.push_back(make_state(time, make_gaussian(g, 0.5, 0.0, 1.0)));
  EXPECT_THROW(Ju_equation_residual(uneven, 1), UnsupportedError);
}

TEST(EquationResiduals, SmallGaussianDefaultStride) {
  const Trajectory view = standard_run().subsample(2);
  for (std::size_t i : {120u, 240u, 360u}) {
    EXPECT_LT(v_equation_residual(view, i), 1e-3) << "t = " << view[i].t;
    EXPECT_LT(Ju_equation_residual(view, i), 5e-3) << "t = " << view[i].t;
    EXPECT_LT(Pu_equation_residual(view, i), 5e-3) << "t = " << view[i].t;
  }
}

TEST(EquationResiduals, SecondOrderInStride) {
  const Trajectory& full = standard_run();
  const Trajectory view = full.subsample(2);
  for (std::size_t i : {120u, 240u, 360u}) {
    EXPECT_NEAR(v_equation_residual(view, i) / v_equation_residual(full, 2 * i), 4.0, 0.5);
    EXPECT_NEAR(Ju_equation_residual(view, i) / Ju_equation_residual(full, 2 * i), 4.0, 0.5);
    EXPECT_NEAR(Pu_equation_residual(view, i) / Pu_equation_residual(full, 2 * i), 4.0, 0.5);
  }
}

TEST(EquationResiduals, WavePacketShortHorizon) {
  const GridSpec g(4096, 256.0);
  StepperConfig c;
  c.dt = 0.0025;
  const Trajectory t = evolve(wave_packet(g, 0.3, 1.0), kParams, c, 0.5, 1);
  const std::size_t mid = t.size() / 2;
  EXPECT_LT(v_equation_residual(t, mid), 5e-3);
  EXPECT_LT(Ju_equation_residual(t, mid), 5e-3);
  EXPECT_LT(Pu_equation_residual(t, mid), 5e-3);
}

TEST(VectorFieldSlice, CollectsAllFields) {
  const Trajectory view = standard_run().subsample(40);
  const VectorFieldSlice first = vector_field_slice(view, 0);
  EXPECT_FALSE(first.residual_v_eq.has_value());
  const VectorFieldSlice mid = vector_field_slice(view, 5);
  ASSERT_TRUE(mid.residual_v_eq.has_value());
  EXPECT_GE(*mid.residual_v_eq, 0.0);
  EXPECT_GE(mid.residual_Puv, 0.0);
  EXPECT_TRUE(mid.Ju.all_finite() && mid.v.all_finite() && mid.Pu.all_finite());
}
