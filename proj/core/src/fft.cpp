#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace gkdv::detail {
namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
  std::lock_guard lock(planner_mutex());
  real_ = fftw_alloc_real(n);
  half_ = fftw_alloc_complex(n / 2 + 1);
  auto* h = static_cast<fftw_complex*>(half_);
  const int len = static_cast<int>(n);
  // ESTIMATE keeps plan selection independent of timing, so results are bitwise repeatable.
  forward_plan_ = fftw_plan_dft_r2c_1d(len, real_, h, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_c2r_1d(len, h, real_, FFTW_ESTIMATE);
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  fftw_free(real_);
  fftw_free(half_);
}

std::span<double> FftPlan::real() noexcept { return {real_, n_}; }

std::span<Complex> FftPlan::half() noexcept {
  return {reinterpret_cast<Complex*>(half_), n_ / 2 + 1};
}

void FftPlan::forward() { fftw_execute(static_cast<fftw_plan>(forward_plan_)); }

void FftPlan::backward() { fftw_execute(static_cast<fftw_plan>(backward_plan_)); }

FftPlan& fft_plan(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::unique_ptr<FftPlan>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftPlan>(n);
  return *slot;
}

void to_spectral(const GridSpec& grid, std::span<const double> samples, std::span<Complex> coeffs) {
  const std::size_t n = grid.size();
  FftPlan& plan = fft_plan(n);
  std::copy(samples.begin(), samples.end(), plan.real().begin());
  plan.forward();
  // x_j = -L/2 + j dx contributes the phase e^{i xi_k L/2} = (-1)^k.
  const double scale = grid.dx() / std::sqrt(2.0 * std::numbers::pi);
  auto h = plan.half();
  for (std::size_t k = 0; k <= n / 2; ++k) coeffs[k] = (k % 2 == 0 ? scale : -scale) * h[k];
  for (std::size_t k = n / 2 + 1; k < n; ++k) coeffs[k] = std::conj(coeffs[n - k]);
}

void to_physical(const GridSpec& grid, std::span<const Complex> coeffs, std::span<double> samples) {
  const std::size_t n = grid.size();
  FftPlan& plan = fft_plan(n);
  auto h = plan.half();
  for (std::size_t k = 0; k <= n / 2; ++k) h[k] = k % 2 == 0 ? coeffs[k] : -coeffs[k];
  // c2r ignores the imaginary parts of the self-conjugate modes.
  plan.backward();
  const double scale = grid.dxi() / std::sqrt(2.0 * std::numbers::pi);
  auto r = plan.real();
  for (std::size_t j = 0; j < n; ++j) samples[j] = scale * r[j];
}

}  // namespace gkdv::detail
