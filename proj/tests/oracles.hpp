#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library code it is used to check.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "toepexp/common.hpp"
#include "toepexp/toeplitz.hpp"

namespace oracle {

using toepexp::CMatrix;
using toepexp::Complex;
using toepexp::CVector;

inline CVector random_vector(std::mt19937_64& rng, Eigen::Index n, bool complex_entries = true) {
  std::normal_distribution<double> normal;
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(normal(rng), complex_entries ? normal(rng) : 0.0);
  return v;
}

struct Columns {
  CVector col;
  CVector row;
};

/// Random Toeplitz data with decaying off-diagonals and a dominant diagonal,
/// so the matrix is well conditioned.
inline Columns random_well_conditioned(std::mt19937_64& rng, Eigen::Index n, bool complex_entries = true) {
  CVector col = random_vector(rng, n, complex_entries);
  CVector row = random_vector(rng, n, complex_entries);
  double off = 0.0;
  for (Eigen::Index k = 1; k < n; ++k) {
    const double decay = 1.0 / ((1.0 + k) * (1.0 + k));
    col[k] *= decay;
    row[k] *= decay;
    off += std::abs(col[k]) + std::abs(row[k]);
  }
  col[0] = row[0] = Complex(1.0 + 2.0 * off, 0.0);
  return {col, row};
}

/// Random Toeplitz data without any structure guarantee.
inline Columns random_columns(std::mt19937_64& rng, Eigen::Index n, bool complex_entries = true) {
  Columns c{random_vector(rng, n, complex_entries), random_vector(rng, n, complex_entries)};
  c.row[0] = c.col[0];
  return c;
}

/// Dense Toeplitz matrix from entry definition (i, j) -> t_{i-j}.
inline CMatrix dense_toeplitz(const CVector& col, const CVector& row) {
  const Eigen::Index n = col.size();
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = i >= j ? col[i - j] : row[j - i];
  }
  return m;
}

inline CMatrix dense_circulant(const CVector& first_col) {
  const Eigen::Index n = first_col.size();
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = first_col[((i - j) % n + n) % n];
  }
  return m;
}

/// Direct O(n^2) DFT, X_k = sum_j x_j exp(-2 pi i jk / n).
inline CVector naive_dft(const CVector& x) {
  const Eigen::Index n = x.size();
  CVector out = CVector::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      out[k] += x[j] * Complex(std::cos(angle), std::sin(angle));
    }
  }
  return out;
}

/// Frobenius-nearest circulant by least squares over the basis of cyclic
/// shift matrices, solved with a QR factorization of the vectorized basis.
inline CVector least_squares_circulant(const CMatrix& t) {
  const Eigen::Index n = t.rows();
  CMatrix basis(n * n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    CVector e = CVector::Zero(n);
    e[k] = 1.0;
    const CMatrix shift = dense_circulant(e);
    basis.col(k) = Eigen::Map<const CVector>(shift.data(), n * n);
  }
  const CVector target = Eigen::Map<const CVector>(t.data(), n * n);
  return basis.colPivHouseholderQr().solve(target);
}

/// exp(M) by a plain Taylor series; only for small ||M||.
inline CMatrix taylor_expm(const CMatrix& m, int terms = 60) {
  const Eigen::Index k = m.rows();
  CMatrix sum = CMatrix::Identity(k, k);
  CMatrix term = CMatrix::Identity(k, k);
  for (int j = 1; j < terms; ++j) {
    term = term * m / static_cast<double>(j);
    sum += term;
  }
  return sum;
}

/// exp(M) through the eigendecomposition of a Hermitian M.
inline CMatrix hermitian_expm(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  const CVector d = es.eigenvalues().array().exp().cast<Complex>();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

/// Textbook Arnoldi with classical two-pass Gram-Schmidt on a dense operator.
struct DenseArnoldi {
  CMatrix v;  // n x (m+1)
  CMatrix h;  // (m+1) x m
};

inline DenseArnoldi dense_arnoldi(const CMatrix& op, const CVector& start, Eigen::Index m) {
  const Eigen::Index n = op.rows();
  DenseArnoldi out{CMatrix::Zero(n, m + 1), CMatrix::Zero(m + 1, m)};
  out.v.col(0) = start / start.norm();
  for (Eigen::Index j = 0; j < m; ++j) {
    CVector w = op * out.v.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      const CVector c = out.v.leftCols(j + 1).adjoint() * w;
      w -= out.v.leftCols(j + 1) * c;
      out.h.col(j).head(j + 1) += c;
    }
    out.h(j + 1, j) = w.norm();
    out.v.col(j + 1) = w / w.norm();
  }
  return out;
}

inline double rel_err(const CVector& a, const CVector& b) { return (a - b).norm() / b.norm(); }

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

/// sigma_max by full SVD.
inline double svd_two_norm(const CMatrix& m) {
  return Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
}

inline double column_sum_norm(const CMatrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace oracle
