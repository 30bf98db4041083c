#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toepexp/common.hpp"
#include "toepexp/krylov_expm.hpp"
#include "toepexp/toeplitz.hpp"

namespace toepexp {

/// System tolerance licensed by an exponential tolerance:
///   tol_sys = |gamma| tol_exp / (6 sqrt(m_cap) max{||fcol||_2, ||frow||_2}),
/// with fcol/frow the first column/row of I + gamma A.
struct ToleranceBudget {
  double tol_exp = 0.0;
  double tol_sys = 0.0;
  double gamma = 0.0;
  std::size_t m_cap = 100;
  double norm_factor = 0.0;
};

/// `t_shifted` is I + gamma A. Errors: InvalidArgument for tol_exp <= 0,
/// gamma == 0 or m_cap == 0.
ToleranceBudget tolerance_budget(const ToeplitzMatrix& t_shifted, double gamma, double tol_exp,
                                 std::size_t m_cap = 100);

enum class Algorithm { exact, inexact };
std::string to_string(Algorithm algorithm);

struct PhaseTimes {
  double solve_systems_seconds = 0.0;
  double arnoldi_seconds = 0.0;
  double small_expm_seconds = 0.0;
  double total_seconds = 0.0;
};

struct RunOptions {
  double tol_exp = 1e-6;
  std::size_t m_max = 100;
  std::size_t m_cap = 100;
  /// System tolerance of the "exact" algorithm.
  double exact_tol_sys = 1e-14;
  /// 0 selects min(n, 1000).
  std::size_t gmres_max_iter = 0;
  /// Keep V_m and u'_m so that `residual_gap` can be evaluated.
  bool retain_basis = false;
};

struct RunReport {
  Algorithm algorithm = Algorithm::exact;
  ExpmResult expm_result;
  ToleranceBudget budget;
  std::pair<std::size_t, std::size_t> gsf_solve_iters{0, 0};
  /// ||y_ref - y_m||_2 / ||y_ref||_2, filled by `attach_reference`.
  std::optional<double> relative_error;
  PhaseTimes wall_times;
  std::optional<double> residual_gap;
  /// ||I + gamma A||_1 / (||H_m^{-1}||_2 ||u_m||_2), the a-posteriori check of
  /// the assumption behind the practical budget.
  double assumption_ratio = 0.0;
};

/// Builds T = I + gamma A, solves the two systems to `exact_tol_sys` and runs
/// the shift-and-invert Arnoldi method with GSF applies.
/// Errors: SolverFailure, XiZero, SingularPreconditioner, SingularHessenberg.
RunReport run_exact(const ToeplitzMatrix& a, const CVector& v, double t, double gamma, const RunOptions& options);

/// As `run_exact` with tol_sys from `tolerance_budget`. When `retain_basis`
/// is set, `residual_gap` is filled.
RunReport run_inexact(const ToeplitzMatrix& a, const CVector& v, double t, double gamma, const RunOptions& options);

/// ||r_real - r_comp||_2 with r_real = -A V_m u_m - V_m u'_m evaluated by
/// explicit Toeplitz matvecs and r_comp = (h_{m+1,m}/gamma e_m^T H^{-1} u_m)(I + gamma A) v_{m+1}.
/// Errors: InvalidArgument when the result does not retain its basis.
double residual_gap(const ToeplitzMatrix& a, const ExpmResult& result, double gamma);

/// ||y_ref - y_m||_2 / ||y_ref||_2. Errors: ZeroReference, DimensionMismatch.
double relative_error(const CVector& y_ref, const CVector& y_m);

enum class ReferenceMode { dense_expm, tight_arnoldi };

/// dense_expm: exp(-t A) v with the dense matrix (requires n <= dense cap);
/// tight_arnoldi: run_exact with tol_exp = 1e-14 at the given gamma.
/// Errors: DenseCapExceeded and those of run_exact.
CVector reference_solution(const ToeplitzMatrix& a, const CVector& v, double t, ReferenceMode mode,
                           double gamma = 0.1);

void attach_reference(RunReport& report, const CVector& y_ref);

struct SweepCell {
  double tol_exp = 0.0;
  RunReport report;
};

/// Inexact runs for each tol_exp, evaluated concurrently on up to `threads`
/// workers (0 = hardware concurrency) and returned in input order. Each cell
/// retains its basis and carries the residual gap; when `y_ref` is given the
/// relative error is attached as well.
std::vector<SweepCell> tolerance_sweep(const ToeplitzMatrix& a, const CVector& v, double t, double gamma,
                                       const std::vector<double>& tol_exp_list, const std::optional<CVector>& y_ref,
                                       std::size_t threads = 0);

}  // namespace toepexp
