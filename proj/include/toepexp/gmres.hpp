#pragma once

#include <cstddef>
#include <vector>

#include "toepexp/common.hpp"

namespace toepexp {

struct GmresOptions {
  /// Absolute tolerance on the left-preconditioned residual ||M^{-1}(b - T q)||_2.
  double tol = 1e-14;
  /// 0 selects min(n, 1000).
  std::size_t max_iter = 0;
  /// Stop after this many consecutive steps whose relative decrease is < stagnation_ratio.
  std::size_t stagnation_window = 50;
  double stagnation_ratio = 1e-14;
};

struct SolveReport {
  CVector solution;
  std::size_t iterations = 0;
  /// Givens-recurrence estimate of the preconditioned residual, one per step.
  std::vector<double> precond_residual_history;
  bool converged = false;
  bool happy_breakdown = false;
  bool stagnated = false;
  /// Preconditioned residual recomputed from the returned solution.
  double final_precond_residual = 0.0;
  /// max |V^H V - I| over the Krylov basis at exit.
  double orthogonality_loss = 0.0;
};

/// Unrestarted GMRES on M^{-1} T q = M^{-1} b, starting from q = 0.
/// `apply_op` is T, `apply_precond` is M^{-1}. Errors: DimensionMismatch when
/// an operator returns a vector of the wrong length.
SolveReport gmres(const LinearOperator& apply_op, const LinearOperator& apply_precond, const CVector& b,
                  const GmresOptions& options);

}  // namespace toepexp
