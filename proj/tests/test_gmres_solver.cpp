#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "toepexp/circulant.hpp"
#include "toepexp/gmres.hpp"

using namespace toepexp;

namespace {

const LinearOperator identity = [](const CVector& v) { return v; };

LinearOperator dense_op(const CMatrix& m) {
  return [m](const CVector& v) { return CVector(m * v); };
}

}  // namespace

TEST_CASE("identity system converges in one step") {
  std::mt19937_64 rng(1);
  const CVector b = oracle::random_vector(rng, 10);
  const SolveReport r = gmres(identity, identity, b, {});
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK(oracle::rel_err(r.solution, b) <= 1e-15);
}

TEST_CASE("scaled identity") {
  CVector b(2);
  b << 4.0, 8.0;
  const LinearOperator twice = [](const CVector& v) { return CVector(2.0 * v); };
  const SolveReport r = gmres(twice, identity, b, {});
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CVector expected(2);
  expected << 2.0, 4.0;
  CHECK(oracle::max_abs(r.solution - expected) <= 1e-15);
}

TEST_CASE("random dense system matches direct solve") {
  std::mt19937_64 rng(2);
  CMatrix m = CMatrix::Identity(8, 8) * 4.0;
  for (Eigen::Index i = 0; i < 8; ++i) m.col(i) += 0.3 * oracle::random_vector(rng, 8);
  const CVector b = oracle::random_vector(rng, 8);
  GmresOptions options;
  options.tol = 1e-12;
  const SolveReport r = gmres(dense_op(m), identity, b, options);
  CHECK(r.converged);
  CHECK(oracle::rel_err(r.solution, CVector(m.partialPivLu().solve(b))) <= 1e-10);
}

TEST_CASE("zero right-hand side") {
  const SolveReport r = gmres(identity, identity, CVector::Zero(5), {});
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.solution.norm() == 0.0);
}

TEST_CASE("preconditioned Toeplitz solve: residual history, orthogonality, final residual") {
  std::mt19937_64 rng(3);
  for (const Eigen::Index n : {64, 256, 512}) {
    CAPTURE(n);
    const auto cols = oracle::random_columns(rng, n);
    // Shift to make the problem nonsingular but not trivially preconditioned.
    CVector col = cols.col;
    CVector row = cols.row;
    col[0] = row[0] = col[0] + 3.0 * std::sqrt(static_cast<double>(n));
    const auto t = ToeplitzMatrix::from_columns(col, row);
    const auto c = chan_preconditioner(t);
    const LinearOperator op = [&](const CVector& v) { return t.matvec(v); };
    const LinearOperator pre = [&](const CVector& v) { return c.solve(v); };
    const CVector b = oracle::random_vector(rng, n);
    GmresOptions options;
    options.tol = 1e-10;
    const SolveReport r = gmres(op, pre, b, options);
    REQUIRE(r.converged);
    REQUIRE(!r.precond_residual_history.empty());
    for (std::size_t k = 1; k < r.precond_residual_history.size(); ++k) {
      CHECK(r.precond_residual_history[k] <= r.precond_residual_history[k - 1]);
    }
    CHECK(r.precond_residual_history.back() <= options.tol);
    CHECK(r.orthogonality_loss <= 1e-10);
    // Recompute the preconditioned residual independently.
    const CMatrix dense = oracle::dense_toeplitz(col, row);
    const CVector true_res = c.solve(CVector(b - dense * r.solution));
    CHECK(std::abs(true_res.norm() - r.final_precond_residual) <= 1e-8 * r.final_precond_residual + 1e-15);
    CHECK(std::abs(r.final_precond_residual - r.precond_residual_history.back()) <=
          1e-8 * r.precond_residual_history.back() + 1e-14);
    CHECK(oracle::rel_err(r.solution, CVector(dense.partialPivLu().solve(b))) <= 1e-8);
  }
}

TEST_CASE("iteration cap reports non-convergence") {
  std::mt19937_64 rng(4);
  CMatrix m = CMatrix::Identity(30, 30);
  for (Eigen::Index i = 0; i < 30; ++i) m(i, i) = 1.0 + i;  // 30 distinct eigenvalues
  const CVector b = oracle::random_vector(rng, 30);
  GmresOptions options;
  options.tol = 1e-14;
  options.max_iter = 3;
  const SolveReport r = gmres(dense_op(m), identity, b, options);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
  CHECK(r.precond_residual_history.size() == 3);
}

TEST_CASE("no progress on the cyclic shift stops by stagnation") {
  // For the cyclic shift and b = e_1 the GMRES residual stays at 1 until the
  // Krylov space fills the whole space after n steps.
  const Eigen::Index n = 120;
  CVector shift_col = CVector::Zero(n);
  shift_col[1] = 1.0;
  const CMatrix m = oracle::dense_circulant(shift_col);
  CVector b = CVector::Zero(n);
  b[0] = 1.0;
  GmresOptions options;
  options.tol = 1e-10;
  const SolveReport r = gmres(dense_op(m), identity, b, options);
  CHECK_FALSE(r.converged);
  CHECK(r.stagnated);
  CHECK_FALSE(r.happy_breakdown);
  CHECK(r.iterations == options.stagnation_window);
  CHECK(r.precond_residual_history.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("operator returning the wrong length") {
  const LinearOperator bad = [](const CVector& v) { return CVector(v.head(v.size() - 1)); };
  try {
    gmres(bad, identity, CVector::Ones(4), {});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
    CHECK(e.where() == "gmres_solver::gmres");
  }
}
