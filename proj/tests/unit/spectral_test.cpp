#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gkdv/error.hpp"
#include "gkdv/evolve.hpp"
#include "gkdv/norms.hpp"
#include "gkdv/spectral.hpp"

using namespace gkdv;

namespace {

constexpr double kPi = std::numbers::pi;

// Smooth random field: a few Gaussians of random sign, offset and width.
RealField random_smooth(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealField f(g);
  for (int m = 0; m < 5; ++m) f += make_gaussian(g, u(rng), 4.0 * u(rng), 1.2 + 0.5 * u(rng));
  return f;
}

double max_diff(const SpectralField& a, const SpectralField& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

double max_diff(const RealField& a, const RealField& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

}  // namespace

TEST(GridSpec, CoordinatesAndWavenumbers) {
  const GridSpec g(1024, 64.0);
  EXPECT_DOUBLE_EQ(g.dx() * 1024, 64.0);
  EXPECT_DOUBLE_EQ(g.x(0), -32.0);
  const auto x = g.coordinates();
  for (std::size_t j = 1; j < x.size(); ++j) EXPECT_LT(x[j - 1], x[j]);
  EXPECT_EQ(g.mode(g.nyquist_index()), -512);
  for (std::size_t k = 1; k < g.size(); ++k) {
    if (k == g.nyquist_index()) continue;
    EXPECT_EQ(g.xi(g.mirror(k)), -g.xi(k));
  }
  EXPECT_THROW(GridSpec(1023, 64.0), InvalidFieldError);
  EXPECT_THROW(GridSpec(1024, -1.0), InvalidFieldError);
}

TEST(ForwardTransform, ZeroField) {
  const GridSpec g(1024, 64.0);
  const SpectralField f = forward_transform(RealField(g));
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(f[k], Complex(0.0, 0.0));
}

TEST(ForwardTransform, GaussianClosedForm) {
  const GridSpec g(1024, 64.0);
  const SpectralField f = forward_transform(make_gaussian(g, 1.0, 0.0, 1.0));
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double xi = g.xi(k);
    worst = std::max(worst, std::abs(f[k] - Complex(std::exp(-xi * xi / 4.0) / std::sqrt(2.0), 0.0)));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(ForwardTransform, RejectsNonFinite) {
  const GridSpec g(64, 8.0);
  RealField u(g);
  u[3] = std::nan("");
  EXPECT_THROW(forward_transform(u), InvalidFieldError);
}

TEST(ForwardTransform, ParsevalAndRoundTripProperty) {
  const GridSpec g(1024, 64.0);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const RealField u = random_smooth(g, seed);
    const SpectralField f = forward_transform(u);
    EXPECT_NEAR(f.l2_norm() / lebesgue(u, 2.0), 1.0, 1e-12);
    EXPECT_LT(max_diff(inverse_transform(f), u) / u.max_abs(), 1e-12);
  }
}

TEST(InverseTransform, ZeroCoefficients) {
  const GridSpec g(256, 16.0);
  EXPECT_EQ(inverse_transform(SpectralField(g)).max_abs(), 0.0);
}

TEST(InverseTransform, SingleModeFollowsConvention) {
  const GridSpec g(256, 16.0);
  SpectralField f(g);
  const std::size_t k1 = 3;
  f[k1] = 0.5;
  f[g.mirror(k1)] = 0.5;
  const RealField u = inverse_transform(f);
  // (2 pi)^{-1/2} sum u_hat e^{i x xi} d xi with two cells of height 1/2.
  double worst = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double expected = g.dxi() * std::cos(g.xi(k1) * g.x(j)) / std::sqrt(2.0 * kPi);
    worst = std::max(worst, std::abs(u[j] - expected));
  }
  EXPECT_LT(worst, 1e-15);
}

TEST(InverseTransform, RejectsAsymmetricCoefficients) {
  const GridSpec g(256, 16.0);
  SpectralField f(g);
  f[3] = Complex(0.5, 0.1);
  EXPECT_THROW(inverse_transform(f), SymmetryViolationError);
}

TEST(AiryPropagate, IdentityAtZero) {
  const GridSpec g(512, 32.0);
  const SpectralField f = forward_transform(random_smooth(g, 3));
  EXPECT_EQ(max_diff(airy_propagate(f, 0.0), f), 0.0);
}

TEST(AiryPropagate, UnitaryGroupProperty) {
  const GridSpec g(1024, 64.0);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const SpectralField f = forward_transform(random_smooth(g, seed));
    const double t1 = 0.3 * static_cast<double>(seed), t2 = -1.7 + 0.1 * static_cast<double>(seed);
    const SpectralField a = airy_propagate(airy_propagate(f, t1), t2);
    const SpectralField b = airy_propagate(f, t1 + t2);
    EXPECT_LT(max_diff(a, b), 1e-12);
    EXPECT_NEAR(b.l2_norm(), f.l2_norm(), 1e-12 * f.l2_norm());
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(std::abs(b[k]), std::abs(f[k]), 1e-15);
  }
}

TEST(AiryPropagate, GaussianMatchesOscillatoryIntegral) {
  // Oracle: (2 pi)^{-1/2} int e^{i x xi + i t xi^3} 2^{-1/2} e^{-xi^2/4} d xi by
  // a fine trapezoid rule, independent of the grid.
  const GridSpec g(32768, 8192.0);
  const double t = 20.0;
  const RealField v = airy_propagate(make_gaussian(g, 1.0, 0.0, 1.0), t);
  for (double x : {-20.0, -5.0, 0.0, 3.0, 10.0}) {
    const auto j = static_cast<std::size_t>(std::llround((x + 0.5 * g.length()) / g.dx()));
    const double xj = g.x(j);
    const int m = 400000;
    const double h = 24.0 / m;
    double re = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double xi = -12.0 + i * h;
      const double w = (i == 0 || i == m) ? 0.5 : 1.0;
      re += w * std::cos(xj * xi + t * xi * xi * xi) * std::exp(-xi * xi / 4.0);
    }
    const double expected = re * h / std::sqrt(2.0) / std::sqrt(2.0 * kPi);
    EXPECT_NEAR(v[j], expected, 1e-6) << "x = " << xj;
  }
}

TEST(SpatialDerivative, ConstantGivesZero) {
  const GridSpec g(128, 16.0);
  RealField c(g, std::vector<double>(128, 2.5));
  for (int k = 1; k <= 4; ++k) EXPECT_LT(derivative(c, k).max_abs(), 1e-14);
}

TEST(SpatialDerivative, SingleMode) {
  const GridSpec g(256, 32.0);
  const double k = 2.0 * kPi * 3.0 / g.length();
  RealField s(g), c(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    s[j] = std::sin(k * g.x(j));
    c[j] = k * std::cos(k * g.x(j));
  }
  EXPECT_LT(max_diff(derivative(s, 1), c), 1e-10);
}

TEST(SpatialDerivative, ThirdDerivativeMatchesFiniteDifferences) {
  // Centered 5-point stencil for u''' has O(dx^2) error; doubling n cuts it by ~4.
  auto fd_error = [](std::size_t n) {
    const GridSpec g(n, 32.0);
    const RealField u = make_gaussian(g, 1.0, 0.0, 1.0);
    const RealField d3 = derivative(u, 3);
    const double h = g.dx();
    double worst = 0.0;
    for (std::size_t j = 2; j + 2 < n; ++j) {
      const double fd = (u[j + 2] - 2.0 * u[j + 1] + 2.0 * u[j - 1] - u[j - 2]) / (2.0 * h * h * h);
      worst = std::max(worst, std::abs(fd - d3[j]));
    }
    return worst;
  };
  const double e1 = fd_error(256), e2 = fd_error(512);
  EXPECT_LT(e2 / derivative(make_gaussian(GridSpec(512, 32.0), 1.0, 0.0, 1.0), 3).max_abs(), 1e-2);
  EXPECT_NEAR(e1 / e2, 4.0, 0.3);
}

TEST(SpatialDerivative, OrderLimitAndNyquist) {
  const GridSpec g(64, 8.0);
  SpectralField f(g);
  EXPECT_THROW(spatial_derivative(f, 5), UnsupportedOrderError);
  EXPECT_THROW(spatial_derivative(f, -1), UnsupportedOrderError);
  f[g.nyquist_index()] = 1.0;
  EXPECT_EQ(spatial_derivative(f, 1)[g.nyquist_index()], Complex(0.0, 0.0));
  EXPECT_EQ(spatial_derivative(f, 3)[g.nyquist_index()], Complex(0.0, 0.0));
}

TEST(SpatialDerivative, CompositionProperty) {
  const GridSpec g(1024, 64.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SpectralField f = forward_transform(random_smooth(g, seed));
    const SpectralField a = spatial_derivative(spatial_derivative(spatial_derivative(f, 1), 1), 1);
    const SpectralField b = spatial_derivative(f, 3);
    EXPECT_LT(max_diff(a, b) / b.l2_norm(), 1e-10);
  }
}

TEST(FractionalDerivative, ZeroOrderIsIdentity) {
  const GridSpec g(256, 32.0);
  const SpectralField f = forward_transform(random_smooth(g, 2));
  EXPECT_EQ(max_diff(fractional_derivative(f, 0.0), f), 0.0);
  EXPECT_THROW(fractional_derivative(f, -0.5), UnsupportedError);
}

TEST(FractionalDerivative, SecondOrderMatchesLaplacian) {
  const GridSpec g(256, 32.0);
  const double k = 2.0 * kPi * 4.0 / g.length();
  RealField c(g);
  for (std::size_t j = 0; j < g.size(); ++j) c[j] = std::cos(k * g.x(j));
  const RealField a = inverse_transform(fractional_derivative(forward_transform(c), 2.0));
  EXPECT_LT(max_diff(a, -1.0 * derivative(c, 2)), 1e-12);
  EXPECT_LT(max_diff(a, k * k * c), 1e-10);
}

TEST(FractionalDerivative, GaussianMatchesDirectMultiplierSum) {
  // Oracle: direct O(n^2) evaluation of (2 pi)^{-1/2} sum |xi|^s u_hat(xi) e^{i x xi} d xi
  // with the closed-form Gaussian transform, bypassing the FFT.
  const GridSpec g(1024, 64.0);
  const double s = 0.75 - 1.0 / (2.0 * 1.8);
  const RealField out = inverse_transform(fractional_derivative(forward_transform(make_gaussian(g, 1.0, 0.0, 1.0)), s));
  for (std::size_t j : {0ul, 400ul, 512ul, 530ul, 700ul}) {
    double acc = 0.0;
    for (std::size_t k = 1; k < g.size(); ++k) {
      if (k == g.nyquist_index()) continue;
      const double xi = g.xi(k);
      acc += std::pow(std::abs(xi), s) * std::exp(-xi * xi / 4.0) / std::sqrt(2.0) * std::cos(xi * g.x(j));
    }
    EXPECT_NEAR(out[j], acc * g.dxi() / std::sqrt(2.0 * kPi), 1e-8);
  }
}

TEST(MultiplyByX, ZeroParityAndMoment) {
  const GridSpec g(1024, 64.0);
  EXPECT_EQ(multiply_by_x(RealField(g)).max_abs(), 0.0);
  const RealField u = make_gaussian(g, 1.0, 0.0, 1.0);
  const RealField xu = multiply_by_x(u);
  EXPECT_NEAR(inner_product(xu, u), 0.0, 1e-12);
  EXPECT_NEAR(inner_product(xu, xu), std::sqrt(kPi / 2.0) / 4.0, 1e-8);
  EXPECT_FALSE(boundary_advisory(u));
}

TEST(BoundaryMass, FlagsFieldsNearTheEdge) {
  const GridSpec g(1024, 64.0);
  EXPECT_LT(boundary_mass_fraction(make_gaussian(g, 1.0, 0.0, 1.0)), 1e-30);
  EXPECT_TRUE(boundary_advisory(make_gaussian(g, 1.0, 28.0, 1.0)));
  EXPECT_EQ(boundary_mass_fraction(RealField(g)), 0.0);
}
