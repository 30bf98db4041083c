#include "toepexp/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <thread>

#include "toepexp/gsf.hpp"

namespace toepexp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool is_real(const CMatrix& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; }

RunReport run_with_tolerance(const ToeplitzMatrix& a, const CVector& v, double t, double gamma,
                             const RunOptions& options, Algorithm algorithm) {
  const auto total_start = Clock::now();
  RunReport report;
  report.algorithm = algorithm;

  const ToeplitzMatrix shifted = a.shifted(gamma);
  report.budget = tolerance_budget(shifted, gamma, options.tol_exp, options.m_cap);
  const double tol_sys = algorithm == Algorithm::exact ? options.exact_tol_sys : report.budget.tol_sys;

  auto start = Clock::now();
  const GsfInverse g = build_gsf(shifted, tol_sys, options.gmres_max_iter);
  report.wall_times.solve_systems_seconds = seconds_since(start);
  report.gsf_solve_iters = {g.x_report()->iterations, g.y_report()->iterations};

  ExpmOptions expm_options;
  expm_options.tol_exp = options.tol_exp;
  expm_options.m_max = options.m_max;
  expm_options.retain_basis = options.retain_basis;
  expm_options.tol_sys = tol_sys;
  const LinearOperator inverse = [&g](const CVector& w) { return g.apply(w); };
  report.expm_result = approx_exponential(shifted, inverse, v, t, gamma, expm_options);
  report.wall_times.arnoldi_seconds = report.expm_result.arnoldi_seconds;
  report.wall_times.small_expm_seconds = report.expm_result.small_expm_seconds;

  const double denom = report.expm_result.h_inv_2norm * report.expm_result.u_norm;
  report.assumption_ratio = denom > 0.0 ? shifted.one_norm() / denom : 0.0;
  if (options.retain_basis) report.residual_gap = residual_gap(a, report.expm_result, gamma);
  report.wall_times.total_seconds = seconds_since(total_start);
  return report;
}

}  // namespace

ToleranceBudget tolerance_budget(const ToeplitzMatrix& t_shifted, double gamma, double tol_exp, std::size_t m_cap) {
  constexpr const char* where = "inexact_driver::tolerance_budget";
  if (!(tol_exp > 0.0)) throw Error(ErrorKind::InvalidArgument, where, "tol_exp must be positive");
  if (gamma == 0.0 || !std::isfinite(gamma)) throw Error(ErrorKind::InvalidArgument, where, "gamma must be nonzero");
  if (m_cap == 0) throw Error(ErrorKind::InvalidArgument, where, "m_cap must be positive");
  ToleranceBudget budget;
  budget.tol_exp = tol_exp;
  budget.gamma = gamma;
  budget.m_cap = m_cap;
  budget.norm_factor = t_shifted.colrow_two_norm();
  budget.tol_sys =
      std::abs(gamma) * tol_exp / (6.0 * std::sqrt(static_cast<double>(m_cap)) * budget.norm_factor);
  return budget;
}

std::string to_string(Algorithm algorithm) { return algorithm == Algorithm::exact ? "exact" : "inexact"; }

RunReport run_exact(const ToeplitzMatrix& a, const CVector& v, double t, double gamma, const RunOptions& options) {
  return run_with_tolerance(a, v, t, gamma, options, Algorithm::exact);
}

RunReport run_inexact(const ToeplitzMatrix& a, const CVector& v, double t, double gamma, const RunOptions& options) {
  return run_with_tolerance(a, v, t, gamma, options, Algorithm::inexact);
}

double residual_gap(const ToeplitzMatrix& a, const ExpmResult& result, double gamma) {
  constexpr const char* where = "inexact_driver::residual_gap";
  if (!result.has_basis) throw Error(ErrorKind::InvalidArgument, where, "result does not retain V_m and u'_m");
  if (result.basis.rows() != a.size()) throw Error(ErrorKind::DimensionMismatch, where, "size mismatch");
  const CVector y = result.basis * result.u;
  const CVector y_prime = result.basis * result.u_prime;
  const CVector r_real = -a.matvec(y) - y_prime;
  if (result.breakdown) return two_norm_vec(r_real);
  const CVector r_comp = result.residual_scalar * a.shifted(gamma).matvec(result.next_vector);
  return two_norm_vec(r_real - r_comp);
}

double relative_error(const CVector& y_ref, const CVector& y_m) {
  constexpr const char* where = "inexact_driver::relative_error";
  if (y_ref.size() != y_m.size()) throw Error(ErrorKind::DimensionMismatch, where, "vectors differ in length");
  const double ref = two_norm_vec(y_ref);
  if (!(ref > 0.0)) throw Error(ErrorKind::ZeroReference, where, "reference vector has zero norm");
  return two_norm_vec(y_ref - y_m) / ref;
}

CVector reference_solution(const ToeplitzMatrix& a, const CVector& v, double t, ReferenceMode mode, double gamma) {
  if (mode == ReferenceMode::tight_arnoldi) {
    RunOptions options;
    options.tol_exp = 1e-14;
    return run_exact(a, v, t, gamma, options).expm_result.y;
  }
  const CMatrix dense = a.to_dense();
  if (is_real(dense)) {
    const Eigen::MatrixXd e = small_expm(Eigen::MatrixXd(-t * dense.real()));
    return e.cast<Complex>() * v;
  }
  return small_expm(CMatrix(-t * dense)) * v;
}

void attach_reference(RunReport& report, const CVector& y_ref) {
  report.relative_error = relative_error(y_ref, report.expm_result.y);
}

std::vector<SweepCell> tolerance_sweep(const ToeplitzMatrix& a, const CVector& v, double t, double gamma,
                                       const std::vector<double>& tol_exp_list, const std::optional<CVector>& y_ref,
                                       std::size_t threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<SweepCell> cells(tol_exp_list.size());
  auto run_cell = [&](std::size_t i) {
    RunOptions options;
    options.tol_exp = tol_exp_list[i];
    options.retain_basis = true;
    cells[i].tol_exp = tol_exp_list[i];
    cells[i].report = run_inexact(a, v, t, gamma, options);
    if (y_ref) attach_reference(cells[i].report, *y_ref);
  };
  // Cells are independent; results land in their own slot, so the output
  // order (and content) does not depend on scheduling.
  for (std::size_t begin = 0; begin < cells.size(); begin += threads) {
    const std::size_t end = std::min(cells.size(), begin + threads);
    std::vector<std::future<void>> batch;
    for (std::size_t i = begin; i < end; ++i) batch.push_back(std::async(std::launch::async, run_cell, i));
    for (auto& f : batch) f.get();
  }
  return cells;
}

}  // namespace toepexp
