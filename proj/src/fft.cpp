#include "toepexp/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace toepexp {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

FftPlan::FftPlan(std::size_t length) : length_(length) {
  if (length == 0 || (length & (length - 1)) != 0) {
    throw Error(ErrorKind::InvalidArgument, "fft::FftPlan", "length must be a power of two");
  }
  bitrev_.resize(length);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < length) ++bits;
  for (std::size_t i = 0; i < length; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) {
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    }
    bitrev_[i] = r;
  }
  twiddles_.resize(length / 2);
  for (std::size_t k = 0; k < length / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(length);
    twiddles_[k] = Complex(std::cos(angle), std::sin(angle));
  }
}

void FftPlan::transform(Complex* data, bool inverse) const {
  const std::size_t n = length_;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = bitrev_[i];
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t half = 1; half < n; half <<= 1) {
    const std::size_t stride = n / (2 * half);
    for (std::size_t start = 0; start < n; start += 2 * half) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex w = twiddles_[k * stride];
        if (inverse) w = std::conj(w);
        const Complex a = data[start + k];
        const Complex b = w * data[start + k + half];
        data[start + k] = a + b;
        data[start + k + half] = a - b;
      }
    }
  }
}

void FftPlan::forward(Complex* data) const { transform(data, false); }

void FftPlan::inverse(Complex* data) const {
  transform(data, true);
  const double scale = 1.0 / static_cast<double>(length_);
  for (std::size_t i = 0; i < length_; ++i) data[i] *= scale;
}

std::shared_ptr<const FftPlan> fft_plan(std::size_t length) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const FftPlan>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[length];
  if (!slot) slot = std::make_shared<const FftPlan>(length);
  return slot;
}

DftPlan::DftPlan(std::size_t length) : length_(length) {
  if (length == 0) throw Error(ErrorKind::InvalidArgument, "fft::DftPlan", "length must be positive");
  if ((length & (length - 1)) == 0) {
    radix2_ = fft_plan(length);
    return;
  }
  const auto n = static_cast<Eigen::Index>(length);
  radix2_ = fft_plan(next_pow2(2 * length - 1));
  const auto m = static_cast<Eigen::Index>(radix2_->length());
  chirp_.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the angle small.
    const auto k2 = static_cast<unsigned long long>(k) * static_cast<unsigned long long>(k) %
                    (2ULL * static_cast<unsigned long long>(n));
    const double angle = -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp_[k] = Complex(std::cos(angle), std::sin(angle));
  }
  kernel_spectrum_ = CVector::Zero(m);
  kernel_spectrum_[0] = std::conj(chirp_[0]);
  for (Eigen::Index k = 1; k < n; ++k) {
    kernel_spectrum_[k] = std::conj(chirp_[k]);
    kernel_spectrum_[m - k] = std::conj(chirp_[k]);
  }
  radix2_->forward(kernel_spectrum_);
}

CVector DftPlan::forward(const CVector& x) const {
  const auto n = static_cast<Eigen::Index>(length_);
  if (x.size() != n) throw Error(ErrorKind::DimensionMismatch, "fft::DftPlan::forward", "length mismatch");
  if (chirp_.size() == 0) {
    CVector out = x;
    radix2_->forward(out);
    return out;
  }
  CVector work = CVector::Zero(static_cast<Eigen::Index>(radix2_->length()));
  work.head(n) = x.cwiseProduct(chirp_);
  radix2_->forward(work);
  work.array() *= kernel_spectrum_.array();
  radix2_->inverse(work);
  return work.head(n).cwiseProduct(chirp_);
}

CVector DftPlan::inverse(const CVector& x) const {
  CVector out = forward(x.conjugate()).conjugate();
  out /= static_cast<double>(length_);
  return out;
}

std::shared_ptr<const DftPlan> dft_plan(std::size_t length) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const DftPlan>> cache;
  std::shared_ptr<const DftPlan> plan;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(length);
    if (it != cache.end()) return it->second;
  }
  plan = std::make_shared<const DftPlan>(length);
  std::lock_guard lock(mutex);
  return cache.emplace(length, plan).first->second;
}

}  // namespace toepexp
