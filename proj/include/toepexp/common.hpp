#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace toepexp {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// A linear operator given as a callback, e.g. a Toeplitz matvec or a GSF apply.
using LinearOperator = std::function<CVector(const CVector&)>;

enum class ErrorKind {
  DimensionMismatch,
  DiagonalMismatch,
  DenseCapExceeded,
  SingularPreconditioner,
  SolverFailure,
  XiZero,
  SingularHessenberg,
  UsedAfterBreakdown,
  ZeroReference,
  InvalidArgument,
  Io,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library. `where()` names the module and
/// operation ("gsf_inverse::build_gsf") so the CLI can report its origin.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string where, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& where() const noexcept { return where_; }

 private:
  ErrorKind kind_;
  std::string where_;
};

/// Largest n for which dense O(n^2) materializations are allowed. Defaults to
/// 4096 and can be overridden with the TOEPEXP_DENSE_CAP environment variable.
std::size_t dense_cap();

/// Override for the current process (tests).
void set_dense_cap(std::size_t cap);

/// Plain left-to-right summations.
double two_norm_vec(const CVector& v);
double one_norm_vec(const CVector& v);

}  // namespace toepexp
