#pragma once

#include <atomic>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "toepexp/common.hpp"
#include "toepexp/fft.hpp"

namespace toepexp {

/// An n x n Toeplitz operator embedded in an L-point circulant, L the smallest
/// power of two >= 2n-1. Embedding column:
///   [t_0, t_1, ..., t_{n-1}, 0, ..., 0, t_{1-n}, ..., t_{-1}].
class CirculantEmbedding {
 public:
  CirculantEmbedding(const CVector& first_col, const CVector& first_row);

  Eigen::Index size() const noexcept { return n_; }
  std::size_t length() const noexcept { return plan_->length(); }
  const CVector& spectrum() const noexcept { return spectrum_; }
  const FftPlan& plan() const noexcept { return *plan_; }

  /// T v through one forward and one inverse FFT of length L.
  CVector apply(const CVector& v) const;

  /// v zero-padded to length L and transformed.
  CVector transform_padded(const CVector& v) const;
  /// Multiplies a transformed vector by this operator's spectrum, in place.
  void multiply_spectrum(CVector& transformed) const;
  /// Inverse transform and truncation to the first n entries.
  CVector truncate_inverse(CVector transformed) const;

 private:
  Eigen::Index n_;
  std::shared_ptr<const FftPlan> plan_;
  CVector spectrum_;
};

enum class SymbolKind { theta_squared, theta_squared_plus_i_theta_cubed, parter };

enum class CoefficientMethod { quadrature, closed_form };

/// Generating function of a test matrix. Fourier coefficients are obtained by
/// trapezoid quadrature on a power-of-two grid of at least `quadrature_size`
/// points (0 selects 8n), or analytically with `closed_form`.
struct SymbolSpec {
  SymbolKind kind = SymbolKind::theta_squared;
  std::size_t quadrature_size = 0;
  CoefficientMethod method = CoefficientMethod::quadrature;
};

std::string to_string(SymbolKind kind);
/// Accepts "theta2", "theta2-itheta3", "parter".
std::optional<SymbolKind> parse_symbol(const std::string& name);

/// Implicit n x n Toeplitz matrix, entry (i, j) = t_{i-j}. Immutable apart
/// from the lazily built circulant embedding, which is computed once under
/// std::call_once and shared by copies.
class ToeplitzMatrix {
 public:
  /// Errors: DimensionMismatch for unequal/empty inputs, DiagonalMismatch when
  /// |first_col[0] - first_row[0]| > 1e-14.
  static ToeplitzMatrix from_columns(CVector first_col, CVector first_row);
  static ToeplitzMatrix from_symbol(const SymbolSpec& spec, std::size_t n);
  static ToeplitzMatrix scaled_identity(std::size_t n, Complex value = 1.0);

  Eigen::Index size() const noexcept { return first_col_.size(); }
  const CVector& first_col() const noexcept { return first_col_; }
  const CVector& first_row() const noexcept { return first_row_; }
  Complex entry(Eigen::Index i, Eigen::Index j) const {
    return i >= j ? first_col_[i - j] : first_row_[j - i];
  }

  /// Tv by circulant embedding. Errors: DimensionMismatch.
  CVector matvec(const CVector& v) const;

  /// Errors: DenseCapExceeded when n > dense_cap().
  CMatrix to_dense() const;

  /// Exact ||T||_1 in O(n) from prefix sums over the diagonals.
  double one_norm() const;
  /// max{||first_col||_1, ||first_row||_1}.
  double one_norm_proxy() const;
  /// max{||first_col||_2, ||first_row||_2}.
  double colrow_two_norm() const;

  /// I + gamma * this.
  ToeplitzMatrix shifted(double gamma) const;
  ToeplitzMatrix scaled(Complex alpha) const;

  const CirculantEmbedding& embedding() const;
  bool has_cached_spectrum() const;

 private:
  ToeplitzMatrix(CVector first_col, CVector first_row);

  struct Cache {
    std::once_flag once;
    std::unique_ptr<const CirculantEmbedding> embedding;
    std::atomic<bool> ready{false};
  };

  CVector first_col_;
  CVector first_row_;
  std::shared_ptr<Cache> cache_;
};

/// Dense matrix-vector product used by oracles; O(n^2), no cap.
CVector dense_toeplitz_matvec(const ToeplitzMatrix& t, const CVector& v);

/// Text format: line 1 `n`, then n lines `re im` for the first column and n
/// lines `re im` for the first row.
void write_toeplitz(std::ostream& out, const ToeplitzMatrix& t);
ToeplitzMatrix read_toeplitz(std::istream& in);
ToeplitzMatrix load_toeplitz(const std::string& path);
void save_toeplitz(const std::string& path, const ToeplitzMatrix& t);

}  // namespace toepexp
