#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "toepexp/common.hpp"

namespace toepexp {

/// Iterative radix-2 complex FFT for one power-of-two length. Plans are
/// immutable once built and may be shared between threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t length);

  std::size_t length() const noexcept { return length_; }

  /// In-place X_k = sum_j x_j exp(-2 pi i jk / L).
  void forward(Complex* data) const;
  /// In-place inverse, including the 1/L normalization.
  void inverse(Complex* data) const;

  void forward(CVector& data) const { forward(data.data()); }
  void inverse(CVector& data) const { inverse(data.data()); }

 private:
  void transform(Complex* data, bool inverse) const;

  std::size_t length_;
  std::vector<std::size_t> bitrev_;
  std::vector<Complex> twiddles_;  // exp(-2 pi i k / L), k < L/2
};

/// Shared plan for `length` (must be a power of two), built on first request.
std::shared_ptr<const FftPlan> fft_plan(std::size_t length);

/// DFT of any length: radix-2 directly for powers of two, otherwise
/// Bluestein's chirp-z reformulation as a power-of-two convolution.
class DftPlan {
 public:
  explicit DftPlan(std::size_t length);

  std::size_t length() const noexcept { return length_; }

  CVector forward(const CVector& x) const;
  /// Includes the 1/n normalization.
  CVector inverse(const CVector& x) const;

 private:
  std::size_t length_;
  std::shared_ptr<const FftPlan> radix2_;
  // Bluestein data (unused for powers of two).
  CVector chirp_;             // exp(-i pi k^2 / n), k < n
  CVector kernel_spectrum_;   // FFT of the conjugate chirp wrapped to length M
};

std::shared_ptr<const DftPlan> dft_plan(std::size_t length);

/// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

}  // namespace toepexp
