#pragma once

#include <cstddef>
#include <vector>

#include "toepexp/common.hpp"
#include "toepexp/toeplitz.hpp"

namespace toepexp {

/// Shift-and-invert Arnoldi process for (I + gamma A)^{-1}, built one step
/// at a time. After m steps
///   Op V_m = V_m H_m + h_{m+1,m} v_{m+1} e_m^T
/// holds up to the accuracy of the operator, where Op is whatever
/// `apply_shifted_inverse` implements (exact or GSF-based).
class ArnoldiState {
 public:
  /// Errors: InvalidArgument for ||v||_2 == 0 or gamma <= 0.
  ArnoldiState(const CVector& v, double gamma);

  /// One modified Gram-Schmidt step with a second pass when the remainder
  /// drops below 1/sqrt(2) of its initial norm. Breakdown is declared when
  /// h_{m+1,m} <= 1e-14 ||w||_2. Errors: UsedAfterBreakdown, DimensionMismatch.
  void step(const LinearOperator& apply_shifted_inverse);

  std::size_t steps() const noexcept { return hess_cols_.size(); }
  double gamma() const noexcept { return gamma_; }
  double beta() const noexcept { return beta_; }
  bool breakdown() const noexcept { return breakdown_; }
  Eigen::Index dimension() const noexcept { return basis_.front().size(); }

  /// v_{k+1} (0-based column k), k <= steps() (k == steps() only before breakdown).
  const CVector& basis_vector(std::size_t k) const { return basis_.at(k); }
  /// V_m, n x m.
  CMatrix basis() const;
  /// H_m, m x m.
  CMatrix hessenberg() const;
  /// (m+1) x m Hessenberg including the h_{m+1,m} row.
  CMatrix full_hessenberg() const;
  /// h_{m+1,m}; zero after breakdown.
  double subdiagonal() const noexcept { return last_subdiagonal_; }

 private:
  double gamma_;
  double beta_;
  bool breakdown_ = false;
  double last_subdiagonal_ = 0.0;
  std::vector<CVector> basis_;
  std::vector<CVector> hess_cols_;  // column j has j + 2 entries
};

/// exp(M) by scaling and squaring with the [13/13] Pade approximant; M is
/// scaled by 2^-s so that ||M / 2^s||_1 <= 5.37.
CMatrix small_expm(const CMatrix& m);
Eigen::MatrixXd small_expm(const Eigen::MatrixXd& m);

struct SmallCoefficients {
  CVector u;         // exp(-(t/gamma)(H^{-1} - I)) beta e_1
  CVector u_prime;   // -(1/gamma)(H^{-1} - I) u
  CVector h_inv_u;   // H^{-1} u
  CMatrix h_inv;
};

/// Errors: SingularHessenberg when H_m is singular or its reciprocal
/// condition estimate is below 1e-14.
SmallCoefficients small_coeffs(const CMatrix& h_m, double t, double gamma, double beta);

/// |h_{m+1,m}/gamma e_m^T H_m^{-1} u_m| * ||(I + gamma A) v_{m+1}||_2; zero after breakdown.
double computed_residual_norm(const ArnoldiState& state, const SmallCoefficients& coeffs,
                              const ToeplitzMatrix& t_shifted);

struct ExpmOptions {
  double tol_exp = 1e-6;
  std::size_t m_max = 100;
  /// Keep V_{m+1}, u'_m and the residual scalar for residual-gap verification.
  bool retain_basis = false;
  /// Recorded in the result; the solver itself does not use it.
  double tol_sys = 0.0;
};

struct ExpmResult {
  CVector y;
  CVector u;
  std::size_t m = 0;
  std::vector<double> residual_history;
  bool converged = false;
  bool breakdown = false;
  double tol_exp_used = 0.0;
  double tol_sys_used = 0.0;
  double h_inv_2norm = 0.0;
  double u_norm = 0.0;
  double arnoldi_seconds = 0.0;
  double small_expm_seconds = 0.0;

  // Present when ExpmOptions::retain_basis is set.
  bool has_basis = false;
  CMatrix basis;              // V_m, n x m
  CVector next_vector;        // v_{m+1} (zero after breakdown)
  CVector u_prime;            // u'_m
  Complex residual_scalar{};  // h_{m+1,m}/gamma e_m^T H^{-1} u
};

/// Runs Arnoldi steps until the computed residual drops to tol_exp, breakdown,
/// or m_max steps; returns y_m = V_m u_m. `t_shifted` is I + gamma A and is
/// only used for the residual's matvec. Errors: SingularHessenberg (message
/// carries the step index), InvalidArgument.
ExpmResult approx_exponential(const ToeplitzMatrix& t_shifted, const LinearOperator& inverse_apply, const CVector& v,
                              double t, double gamma, const ExpmOptions& options);

}  // namespace toepexp
