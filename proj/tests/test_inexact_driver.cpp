#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "toepexp/driver.hpp"

using namespace toepexp;

namespace {

ToeplitzMatrix theta2(std::size_t n) { return ToeplitzMatrix::from_symbol({SymbolKind::theta_squared}, n); }

ToeplitzMatrix theta2_theta3(std::size_t n) {
  return ToeplitzMatrix::from_symbol({SymbolKind::theta_squared_plus_i_theta_cubed}, n);
}

ToeplitzMatrix zero_matrix(Eigen::Index n) { return ToeplitzMatrix::from_columns(CVector::Zero(n), CVector::Zero(n)); }

CVector dense_reference(const ToeplitzMatrix& a, const CVector& v, double t) {
  const CMatrix ad = oracle::dense_toeplitz(a.first_col(), a.first_row());
  return oracle::hermitian_expm(-t * ad) * v;
}

}  // namespace

TEST_CASE("tolerance budget: unit-norm case") {
  const auto t = ToeplitzMatrix::scaled_identity(8);
  const ToleranceBudget b = tolerance_budget(t, 1.0, 6e-5);
  CHECK(b.tol_sys == doctest::Approx(1e-6).epsilon(1e-15));
  CHECK(b.norm_factor == 1.0);
  CHECK(b.m_cap == 100);
}

TEST_CASE("tolerance budget: published configurations") {
  // theta^2, n = 1e5.
  const ToleranceBudget b1 = tolerance_budget(theta2(100000).shifted(0.1), 0.1, 1e-6);
  CHECK(std::abs(b1.tol_sys / 1.239e-9 - 1.0) <= 0.10);
  // theta^2 + i theta^3, n = 3000.
  const ToleranceBudget b2 = tolerance_budget(theta2_theta3(3000).shifted(0.1), 0.1, 1e-6);
  CHECK(std::abs(b2.tol_sys / 1.010e-9 - 1.0) <= 0.10);
}

TEST_CASE("tolerance budget scales as 1/sqrt(m_cap)") {
  const auto t = theta2(200).shifted(0.1);
  const double b100 = tolerance_budget(t, 0.1, 1e-6, 100).tol_sys;
  const double b400 = tolerance_budget(t, 0.1, 1e-6, 400).tol_sys;
  CHECK(b400 == b100 / 2.0);
}

TEST_CASE("tolerance budget rejects invalid input") {
  const auto t = ToeplitzMatrix::scaled_identity(4);
  CHECK_THROWS_AS(tolerance_budget(t, 0.1, 0.0), Error);
  CHECK_THROWS_AS(tolerance_budget(t, 0.0, 1e-6), Error);
  CHECK_THROWS_AS(tolerance_budget(t, 0.1, 1e-6, 0), Error);
}

TEST_CASE("run_exact and run_inexact on A = 0 return v") {
  const CVector v = CVector::LinSpaced(16, 1.0, 2.0).cast<Complex>();
  RunOptions options;
  const RunReport e = run_exact(zero_matrix(16), v, 1.0, 0.1, options);
  const RunReport i = run_inexact(zero_matrix(16), v, 1.0, 0.1, options);
  CHECK(e.expm_result.m == 1);
  CHECK(i.expm_result.m == 1);
  CHECK(oracle::rel_err(e.expm_result.y, v) <= 1e-15);
  CHECK(oracle::rel_err(i.expm_result.y, v) <= 1e-15);
  CHECK(e.algorithm == Algorithm::exact);
  CHECK(i.algorithm == Algorithm::inexact);
  CHECK(to_string(Algorithm::inexact) == "inexact");
}

TEST_CASE("theta squared, n = 256: accuracy, parity, determinism") {
  const auto a = theta2(256);
  const CVector v = CVector::Ones(256);
  const CVector y_ref = dense_reference(a, v, 1.0);
  RunOptions options;
  options.tol_exp = 1e-6;
  RunReport e = run_exact(a, v, 1.0, 0.1, options);
  RunReport i = run_inexact(a, v, 1.0, 0.1, options);
  attach_reference(e, y_ref);
  attach_reference(i, y_ref);
  REQUIRE(e.relative_error.has_value());
  REQUIRE(i.relative_error.has_value());
  CHECK(*e.relative_error <= 1e-5);
  CHECK(*i.relative_error <= 1e-5);
  CHECK(*i.relative_error <= 2.0 * *e.relative_error);
  CHECK(*e.relative_error <= 2.0 * *i.relative_error);
  CHECK(i.expm_result.tol_sys_used > e.expm_result.tol_sys_used);
  CHECK(e.assumption_ratio > 0.0);

  const RunReport again = run_exact(a, v, 1.0, 0.1, options);
  REQUIRE(again.expm_result.y.size() == e.expm_result.y.size());
  CHECK(std::memcmp(again.expm_result.y.data(), e.expm_result.y.data(),
                    sizeof(Complex) * static_cast<std::size_t>(e.expm_result.y.size())) == 0);
}

TEST_CASE("exact solves give a residual gap at the roundoff floor") {
  for (const std::size_t n : {64u, 256u, 512u}) {
    RunOptions options;
    options.retain_basis = true;
    const RunReport r = run_exact(theta2_theta3(n), CVector::Ones(n), 1.0, 0.1, options);
    REQUIRE(r.residual_gap.has_value());
    CHECK(*r.residual_gap <= 1e-10);
    CHECK(residual_gap(theta2_theta3(n), r.expm_result, 0.1) == doctest::Approx(*r.residual_gap));
  }
  RunOptions plain;
  const RunReport r = run_exact(theta2(32), CVector::Ones(32), 1.0, 0.1, plain);
  CHECK_THROWS_AS(residual_gap(theta2(32), r.expm_result, 0.1), Error);
}

TEST_CASE("inexact errors track tol_exp over a sweep") {
  const auto a = theta2_theta3(1000);
  const CVector v = CVector::Ones(1000);
  const CVector y_ref = reference_solution(a, v, 1.0, ReferenceMode::tight_arnoldi);
  const std::vector<double> tols{1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
  const std::vector<SweepCell> cells = tolerance_sweep(a, v, 1.0, 0.1, tols, y_ref, 1);
  REQUIRE(cells.size() == tols.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    CHECK(cells[k].tol_exp == tols[k]);
    REQUIRE(cells[k].report.relative_error.has_value());
    REQUIRE(cells[k].report.residual_gap.has_value());
    CHECK(*cells[k].report.residual_gap <= 100.0 * tols[k]);
    if (k > 0) CHECK(*cells[k].report.relative_error <= 10.0 * *cells[k - 1].report.relative_error);
  }
  CHECK(*cells.back().report.relative_error < *cells.front().report.relative_error);
}

TEST_CASE("sweep results do not depend on the number of threads") {
  const auto a = theta2_theta3(300);
  const CVector v = CVector::Ones(300);
  const std::vector<double> tols{1e-3, 1e-5, 1e-7, 1e-9};
  const auto serial = tolerance_sweep(a, v, 1.0, 0.1, tols, std::nullopt, 1);
  const auto parallel = tolerance_sweep(a, v, 1.0, 0.1, tols, std::nullopt, 4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t k = 0; k < serial.size(); ++k) {
    CHECK(serial[k].tol_exp == parallel[k].tol_exp);
    CHECK((serial[k].report.expm_result.y - parallel[k].report.expm_result.y).norm() == 0.0);
    CHECK(*serial[k].report.residual_gap == *parallel[k].report.residual_gap);
  }
}

TEST_CASE("looser system tolerance needs fewer GMRES iterations at large n") {
  const auto a = theta2(10000);
  const CVector v = CVector::Ones(10000);
  RunOptions options;
  const RunReport e = run_exact(a, v, 1.0, 0.1, options);
  const RunReport i = run_inexact(a, v, 1.0, 0.1, options);
  CHECK(i.gsf_solve_iters.first + i.gsf_solve_iters.second < e.gsf_solve_iters.first + e.gsf_solve_iters.second);
  CHECK(relative_error(e.expm_result.y, i.expm_result.y) <= 1e-5);
}

TEST_CASE("relative_error") {
  CVector a(2), b(2);
  a << 1.0, 0.0;
  b << 0.0, 1.0;
  CHECK(relative_error(a, a) == 0.0);
  CHECK(relative_error(a, b) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  std::mt19937_64 rng(5);
  const CVector x = oracle::random_vector(rng, 10);
  const CVector y = oracle::random_vector(rng, 10);
  CHECK(relative_error(CVector(3.5 * x), CVector(3.5 * y)) == doctest::Approx(relative_error(x, y)).epsilon(1e-14));
  try {
    relative_error(CVector::Zero(2), a);
    FAIL("expected ZeroReference");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroReference);
  }
  CHECK_THROWS_AS(relative_error(a, CVector::Zero(3)), Error);
}

TEST_CASE("reference_solution") {
  const CVector v = CVector::LinSpaced(12, -1.0, 1.0).cast<Complex>();
  for (const auto mode : {ReferenceMode::dense_expm, ReferenceMode::tight_arnoldi}) {
    // h_11 = 1 + O(eps) from the FFT applies, scaled by t / gamma = 20 in the exponent.
    CHECK(oracle::rel_err(reference_solution(zero_matrix(12), v, 2.0, mode), v) <= 1e-13);
    const CVector y = reference_solution(ToeplitzMatrix::scaled_identity(12, 1.5), v, 2.0, mode);
    CHECK(oracle::rel_err(y, CVector(std::exp(-3.0) * v)) <= 1e-13);
  }
  const auto a = theta2(128);
  const CVector ones = CVector::Ones(128);
  const CVector dense = reference_solution(a, ones, 1.0, ReferenceMode::dense_expm);
  const CVector tight = reference_solution(a, ones, 1.0, ReferenceMode::tight_arnoldi);
  CHECK(oracle::rel_err(tight, dense) <= 1e-10);
  CHECK(oracle::rel_err(dense, dense_reference(a, ones, 1.0)) <= 1e-12);

  set_dense_cap(64);
  try {
    reference_solution(a, ones, 1.0, ReferenceMode::dense_expm);
    FAIL("expected DenseCapExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DenseCapExceeded);
  }
  set_dense_cap(4096);
}
