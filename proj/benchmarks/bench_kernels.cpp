#include <benchmark/benchmark.h>

#include <vector>

#include "gkdv/evolve.hpp"
#include "gkdv/norms.hpp"
#include "gkdv/spectral.hpp"
#include "gkdv/vector_fields.hpp"

namespace {

gkdv::RealField sample(std::size_t n) {
  const gkdv::GridSpec g(n, 64.0 * static_cast<double>(n) / 1024.0);
  return gkdv::make_gaussian(g, 0.5, 0.0, 1.0);
}

void BM_ForwardInverse(benchmark::State& state) {
  const auto u = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto v = gkdv::inverse_transform(gkdv::forward_transform(u));
    benchmark::DoNotOptimize(v.samples().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForwardInverse)->RangeMultiplier(4)->Range(1024, 65536);

void BM_NonlinearFlux(benchmark::State& state) {
  const auto u = gkdv::forward_transform(sample(static_cast<std::size_t>(state.range(0))));
  const gkdv::ModelParams p{1.0, 1.8};
  for (auto _ : state) {
    auto f = gkdv::nonlinear_flux(u, p, 2);
    benchmark::DoNotOptimize(f.coeffs().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NonlinearFlux)->RangeMultiplier(4)->Range(1024, 65536);

void BM_Step(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto u = sample(n);
  const auto scheme = state.range(1) == 0 ? gkdv::Scheme::etdrk4 : gkdv::Scheme::ifrk4;
  const gkdv::Stepper stepper(u.grid(), gkdv::ModelParams{1.0, 1.8}, 1e-3, 2, scheme);
  gkdv::SpectralField uhat = gkdv::forward_transform(u);
  std::vector<gkdv::Complex> c(uhat.coeffs().begin(), uhat.coeffs().end());
  for (auto _ : state) {
    stepper.advance(c);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Step)->ArgsProduct({{1024, 4096, 16384}, {0, 1}});

void BM_IdentityResidual(benchmark::State& state) {
  const auto u = sample(static_cast<std::size_t>(state.range(0)));
  const gkdv::ModelParams p{1.0, 1.8};
  for (auto _ : state) benchmark::DoNotOptimize(gkdv::identity_residual_Puv(u, 1.0, p));
}
BENCHMARK(BM_IdentityResidual)->Arg(4096);

void BM_MixedNorm(benchmark::State& state) {
  const auto u = sample(1024);
  const gkdv::ModelParams p{1.0, 1.8};
  gkdv::StepperConfig cfg;
  cfg.dt = 0.01;
  const auto traj = gkdv::evolve(u, p, cfg, 2.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(gkdv::x_norm(traj, p));
}
BENCHMARK(BM_MixedNorm);

}  // namespace

BENCHMARK_MAIN();
