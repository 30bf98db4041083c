#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "toepexp/circulant.hpp"

using namespace toepexp;

TEST_CASE("identity preconditioner") {
  const auto c = chan_preconditioner(ToeplitzMatrix::scaled_identity(8));
  CHECK(oracle::max_abs(c.eigenvalues() - CVector::Ones(8)) <= 1e-15);
  std::mt19937_64 rng(1);
  const CVector b = oracle::random_vector(rng, 8);
  CHECK(oracle::max_abs(circ_solve(c, b) - b) <= 1e-15);
  CHECK(oracle::max_abs(circ_matvec(c, b) - b) <= 1e-15);
}

TEST_CASE("scalar circulant") {
  CVector col = CVector::Zero(2);
  col[0] = 2.0;
  const auto c = CirculantOperator::from_first_column(col);
  CVector b(2);
  b << 4.0, 6.0;
  CVector expected(2);
  expected << 2.0, 3.0;
  CHECK(oracle::max_abs(circ_solve(c, b) - expected) <= 1e-15);

  const auto three = CirculantOperator::from_first_column(CVector::Constant(1, 3.0));
  CHECK(oracle::max_abs(circ_matvec(three, CVector::Constant(1, 2.0)) - CVector::Constant(1, 6.0)) == 0.0);
}

TEST_CASE("eigenvalues all three scale by three") {
  CVector col = CVector::Zero(5);
  col[0] = 3.0;
  const auto c = CirculantOperator::from_first_column(col);
  CHECK(oracle::max_abs(c.eigenvalues() - CVector::Constant(5, 3.0)) <= 1e-15);
  std::mt19937_64 rng(2);
  const CVector v = oracle::random_vector(rng, 5);
  CHECK(oracle::rel_err(circ_matvec(c, v), 3.0 * v) <= 1e-15);
}

TEST_CASE("circulant input is a fixed point") {
  std::mt19937_64 rng(3);
  for (const Eigen::Index n : {1, 2, 7, 16}) {
    const CVector col = oracle::random_vector(rng, n);
    CVector row(n);
    row[0] = col[0];
    for (Eigen::Index k = 1; k < n; ++k) row[k] = col[n - k];
    const auto c = chan_preconditioner(ToeplitzMatrix::from_columns(col, row));
    CHECK(oracle::rel_err(c.first_column(), col) <= 1e-14);
    // Projection: applying the construction to its own output changes nothing.
    const auto again = chan_preconditioner(c.as_toeplitz());
    CHECK(oracle::rel_err(again.first_column(), c.first_column()) <= 1e-14);
  }
}

TEST_CASE("matches Frobenius least squares over circulants") {
  std::mt19937_64 rng(4);
  for (const Eigen::Index n : {3, 8, 13}) {
    CAPTURE(n);
    const auto cols = oracle::random_columns(rng, n);
    const auto t = ToeplitzMatrix::from_columns(cols.col, cols.row);
    const CVector expected = oracle::least_squares_circulant(oracle::dense_toeplitz(cols.col, cols.row));
    CHECK(oracle::rel_err(chan_preconditioner(t).first_column(), expected) <= 1e-12);
  }
}

TEST_CASE("no worse than the Strang-style circulant from the first column") {
  std::mt19937_64 rng(5);
  for (const Eigen::Index n : {4, 16, 64}) {
    const auto cols = oracle::random_columns(rng, n);
    const CMatrix dense = oracle::dense_toeplitz(cols.col, cols.row);
    const auto c = chan_preconditioner(ToeplitzMatrix::from_columns(cols.col, cols.row));
    const double chan_dist = (oracle::dense_circulant(c.first_column()) - dense).norm();
    const double strang_dist = (oracle::dense_circulant(cols.col) - dense).norm();
    CHECK(chan_dist <= strang_dist * (1 + 1e-14));
  }
}

TEST_CASE("solve and matvec round trip") {
  std::mt19937_64 rng(6);
  const auto cols = oracle::random_well_conditioned(rng, 32);
  const auto c = chan_preconditioner(ToeplitzMatrix::from_columns(cols.col, cols.row));
  const CVector b = oracle::random_vector(rng, 32);
  CHECK((circ_matvec(c, circ_solve(c, b)) - b).norm() / b.norm() <= 1e-12);
  CHECK(oracle::rel_err(circ_solve(c, circ_matvec(c, b)), b) <= 1e-12);
}

TEST_CASE("matvec matches dense circulant, including non power-of-two sizes") {
  std::mt19937_64 rng(7);
  for (const Eigen::Index n : {16, 15, 100}) {
    const CVector col = oracle::random_vector(rng, n);
    const auto c = CirculantOperator::from_first_column(col);
    const CVector v = oracle::random_vector(rng, n);
    CHECK(oracle::rel_err(circ_matvec(c, v), oracle::dense_circulant(col) * v) <= 1e-12);
  }
}

TEST_CASE("singular circulant is rejected with the smallest eigenvalue") {
  // First column (1, -1): eigenvalues 0 and 2.
  CVector col(2);
  col << 1.0, -1.0;
  try {
    CirculantOperator::from_first_column(col);
    FAIL("expected SingularPreconditioner");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularPreconditioner);
    CHECK(std::string(e.what()).find("circulant_precond::") != std::string::npos);
  }
}

TEST_CASE("dimension mismatch") {
  const auto c = chan_preconditioner(ToeplitzMatrix::scaled_identity(4));
  CHECK_THROWS_AS(c.matvec(CVector::Ones(3)), Error);
  CHECK_THROWS_AS(c.solve(CVector::Ones(5)), Error);
}
