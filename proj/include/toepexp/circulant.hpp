#pragma once

#include <memory>

#include "toepexp/common.hpp"
#include "toepexp/fft.hpp"
#include "toepexp/toeplitz.hpp"

namespace toepexp {

/// n x n circulant operator held by its eigenvalues, the length-n DFT of its
/// first column.
class CirculantOperator {
 public:
  /// Throws SingularPreconditioner if any |eigenvalue| <= 1e-300.
  static CirculantOperator from_first_column(const CVector& first_column);

  Eigen::Index size() const noexcept { return eigenvalues_.size(); }
  const CVector& eigenvalues() const noexcept { return eigenvalues_; }
  const CVector& first_column() const noexcept { return first_column_; }

  /// Errors: DimensionMismatch.
  CVector matvec(const CVector& v) const;
  /// C^{-1} b. Errors: DimensionMismatch.
  CVector solve(const CVector& b) const;

  /// The circulant written as a Toeplitz matrix.
  ToeplitzMatrix as_toeplitz() const;

 private:
  CirculantOperator(CVector first_column, CVector eigenvalues, std::shared_ptr<const DftPlan> plan);

  CVector first_column_;
  CVector eigenvalues_;
  std::shared_ptr<const DftPlan> plan_;
};

/// T. Chan's optimal circulant, argmin ||C - T||_F over circulants:
///   c_k = ((n - k) t_k + k t_{k-n}) / n.
CirculantOperator chan_preconditioner(const ToeplitzMatrix& t);

/// Free-function forms of the operator methods.
inline CVector circ_solve(const CirculantOperator& c, const CVector& b) { return c.solve(b); }
inline CVector circ_matvec(const CirculantOperator& c, const CVector& v) { return c.matvec(v); }

}  // namespace toepexp
