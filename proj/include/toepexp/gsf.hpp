#pragma once

#include <memory>
#include <optional>
#include <string>

#include "toepexp/common.hpp"
#include "toepexp/gmres.hpp"
#include "toepexp/toeplitz.hpp"

namespace toepexp {

/// Raised when GMRES does not reach the requested tolerance for one of the
/// two fundamental systems; carries the solver report.
class SolverFailure : public Error {
 public:
  SolverFailure(std::string where, const std::string& what, SolveReport report)
      : Error(ErrorKind::SolverFailure, std::move(where), what), report_(std::move(report)) {}
  const SolveReport& report() const noexcept { return report_; }

 private:
  SolveReport report_;
};

/// Gohberg-Semencul representation of T^{-1} from x = T^{-1} e_1 and
/// y = T^{-1} e_n:
///   T^{-1} = (1/xi0) (L_x R_y - L_y^0 R_x^0),
/// with L_x, L_y^0 lower and R_y, R_x^0 upper triangular Toeplitz factors.
class GsfInverse {
 public:
  /// Errors: DimensionMismatch, XiZero when |x[0]| <= 1e-12 ||x||_2.
  static GsfInverse from_solutions(CVector x, CVector y);

  Eigen::Index size() const noexcept { return x_.size(); }
  const CVector& x() const noexcept { return x_; }
  const CVector& y() const noexcept { return y_; }
  Complex xi0() const noexcept { return x_[0]; }

  /// (1/xi0)(L_x(R_y v) - L_y^0(R_x^0 v)) in six FFTs. Errors: DimensionMismatch.
  CVector apply(const CVector& v) const;

  /// (T^{-1})^H v through the same factors with conjugated spectra.
  /// Errors: DimensionMismatch.
  CVector apply_adjoint(const CVector& v) const;

  /// Dense (1/xi0)(L_x R_y - L_y^0 R_x^0) in O(n^2) via the displacement
  /// recurrence D(i+1, j+1) = D(i, j) + (xi_{i+1} eta_{n-2-j} - eta_i xi_{n-1-j}) / xi0.
  /// Errors: DenseCapExceeded.
  CMatrix to_dense() const;

  /// GMRES reports for Tx = e_1 and Ty = e_n when built by `build_gsf`.
  const std::optional<SolveReport>& x_report() const noexcept { return x_report_; }
  const std::optional<SolveReport>& y_report() const noexcept { return y_report_; }

 private:
  struct Factors;
  GsfInverse(CVector x, CVector y, std::shared_ptr<const Factors> factors);

  CVector x_;
  CVector y_;
  std::shared_ptr<const Factors> factors_;
  std::optional<SolveReport> x_report_;
  std::optional<SolveReport> y_report_;

  friend GsfInverse build_gsf(const ToeplitzMatrix&, double, std::size_t);
};

/// Solves Tx = e_1 and Ty = e_n with T. Chan-preconditioned GMRES to
/// ||M^{-1}(b - Tq)||_2 <= tol_sys and assembles the GSF.
/// Errors: SolverFailure, XiZero, SingularPreconditioner.
GsfInverse build_gsf(const ToeplitzMatrix& t, double tol_sys, std::size_t max_iter = 0);

inline CVector apply_inverse(const GsfInverse& g, const CVector& v) { return g.apply(v); }

/// ||T^{-1}||_2 estimated by `iterations` power steps on T^{-1} (T^{-1})^H
/// using GSF applies only; for n beyond the dense cap. Starts from the
/// all-ones vector, so the estimate is deterministic and never exceeds the
/// true norm.
double inverse_two_norm_estimate(const GsfInverse& g, std::size_t iterations = 20);

enum class NormMode { exact_1norm, colrow_proxy };

std::string to_string(NormMode mode);

struct GsfConditionNumbers {
  /// (||T||_1 ||y||_1) / (|xi0| / ||x||_1)
  double kappa_gsf = 0.0;
  /// ||T||_1 ||y||_1
  double kappa_eff_1 = 0.0;
  /// ||x||_1 / |xi0|, the estimate of the second effective condition number.
  double kappa_eff_2_estimate = 0.0;
  /// ||T||_1 as used (exact or max{||fcol||_1, ||frow||_1}).
  double t_norm = 0.0;
  NormMode mode = NormMode::exact_1norm;
};

/// Errors: XiZero, DimensionMismatch when g and t differ in size.
GsfConditionNumbers gsf_condition_number(const GsfInverse& g, const ToeplitzMatrix& t, NormMode mode);

}  // namespace toepexp
