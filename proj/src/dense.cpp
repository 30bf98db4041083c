#include "toepexp/dense.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace toepexp::dense {

namespace {

bool is_real(const CMatrix& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; }

double largest_eigenvalue_tridiagonal(const std::vector<double>& alpha, const std::vector<double>& beta) {
  const auto k = static_cast<Eigen::Index>(alpha.size());
  Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    tri(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < k) tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

double lanczos_two_norm(const CMatrix& m) {
  const Eigen::Index n = m.cols();
  const Eigen::Index max_steps = std::min<Eigen::Index>(n, 400);
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> normal;
  CVector q(n);
  for (Eigen::Index i = 0; i < n; ++i) q[i] = Complex(normal(rng), 0.0);
  q /= q.norm();

  CMatrix basis(n, max_steps);
  std::vector<double> alpha, beta;
  double previous = 0.0;
  int settled = 0;
  double estimate = 0.0;
  for (Eigen::Index j = 0; j < max_steps; ++j) {
    basis.col(j) = q;
    CVector w = m.adjoint() * (m * q);
    const double a = q.dot(w).real();
    alpha.push_back(a);
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      const CVector coeffs = basis.leftCols(j + 1).adjoint() * w;
      w -= basis.leftCols(j + 1) * coeffs;
    }
    estimate = largest_eigenvalue_tridiagonal(alpha, beta);
    if (j > 0 && std::abs(estimate - previous) <= 1e-13 * std::abs(estimate)) {
      if (++settled >= 3) break;
    } else {
      settled = 0;
    }
    previous = estimate;
    const double b = w.norm();
    if (b == 0.0 || b <= 1e-14 * estimate) break;  // invariant subspace
    beta.push_back(b);
    q = w / b;
  }
  return std::sqrt(std::max(estimate, 0.0));
}

}  // namespace

CMatrix inverse(const CMatrix& m) {
  if (is_real(m)) {
    const Eigen::MatrixXd re = m.real();
    return Eigen::PartialPivLU<Eigen::MatrixXd>(re).inverse().cast<Complex>();
  }
  return Eigen::PartialPivLU<CMatrix>(m).inverse();
}

CVector solve(const CMatrix& m, const CVector& b) { return Eigen::PartialPivLU<CMatrix>(m).solve(b); }

double one_norm(const CMatrix& m) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) sum += std::abs(m(i, j));
    best = std::max(best, sum);
  }
  return best;
}

double two_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (std::max(m.rows(), m.cols()) <= 256) {
    Eigen::BDCSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
  }
  return lanczos_two_norm(m);
}

double condition_1norm(const CMatrix& m) { return one_norm(m) * one_norm(inverse(m)); }

}  // namespace toepexp::dense
