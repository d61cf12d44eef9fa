#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include "gkdv/spectral.hpp"

namespace gkdv::detail {

/// Owns a real-to-complex / complex-to-real FFTW plan pair and the aligned
/// buffers they run on. Not shareable across threads; use fft_plan().
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::span<double> real() noexcept;
  /// Non-negative half spectrum, n/2 + 1 entries.
  std::span<Complex> half() noexcept;
  /// half_k = sum_j real_j e^{-2 pi i j k / n}
  void forward();
  /// real_j = sum_k half-spectrum extended by symmetry, unnormalized. Clobbers half().
  void backward();

 private:
  std::size_t n_;
  double* real_;
  void* half_;
  void* forward_plan_;
  void* backward_plan_;
};

/// Per-thread plan cache keyed by transform length.
FftPlan& fft_plan(std::size_t n);

/// Continuum-normalized transform of real samples into FFT-ordered
/// coefficients; the result is exactly conjugate symmetric.
void to_spectral(const GridSpec& grid, std::span<const double> samples, std::span<Complex> coeffs);
/// Inverse of to_spectral. Reads only the modes 0..n/2 and assumes symmetry.
void to_physical(const GridSpec& grid, std::span<const Complex> coeffs, std::span<double> samples);

}  // namespace gkdv::detail
