#include "toepexp/gmres.hpp"

#include <algorithm>
#include <cmath>

namespace toepexp {

namespace {

constexpr const char* kWhere = "gmres_solver::gmres";

struct Givens {
  double c = 1.0;
  Complex s = 0.0;

  void apply(Complex& x, Complex& y) const {
    const Complex xn = c * x + s * y;
    y = -std::conj(s) * x + c * y;
    x = xn;
  }
};

// Rotation that zeroes b in (a, b).
Givens make_givens(Complex a, Complex b) {
  const double abs_a = std::abs(a);
  const double abs_b = std::abs(b);
  if (abs_b == 0.0) return {1.0, 0.0};
  if (abs_a == 0.0) return {0.0, std::conj(b) / abs_b};
  const double nu = std::hypot(abs_a, abs_b);
  return {abs_a / nu, (a / abs_a) * std::conj(b) / nu};
}

CVector checked(const LinearOperator& op, const CVector& v, const char* which) {
  CVector out = op(v);
  if (out.size() != v.size()) {
    throw Error(ErrorKind::DimensionMismatch, kWhere, std::string(which) + " returned a vector of wrong length");
  }
  return out;
}

}  // namespace

SolveReport gmres(const LinearOperator& apply_op, const LinearOperator& apply_precond, const CVector& b,
                  const GmresOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, kWhere, "tol must be positive");
  const Eigen::Index n = b.size();
  SolveReport report;
  report.solution = CVector::Zero(n);
  if (n == 0 || b.cwiseAbs().maxCoeff() == 0.0) {
    report.converged = true;
    return report;
  }
  const std::size_t max_iter =
      options.max_iter == 0 ? std::min<std::size_t>(static_cast<std::size_t>(n), 1000) : options.max_iter;

  const CVector r0 = checked(apply_precond, b, "apply_precond");
  const double beta = r0.norm();
  if (beta <= options.tol) {
    report.converged = true;
    report.final_precond_residual = beta;
    return report;
  }

  std::vector<CVector> basis;
  basis.reserve(max_iter + 1);
  basis.push_back(r0 / beta);
  std::vector<CVector> hess;  // column k has k + 2 entries
  std::vector<Givens> rotations;
  std::vector<Complex> g{Complex(beta, 0.0)};

  double previous = beta;
  std::size_t slow_steps = 0;
  for (std::size_t k = 0; k < max_iter; ++k) {
    CVector w = checked(apply_precond, checked(apply_op, basis[k], "apply_op"), "apply_precond");
    const double pre_norm = w.norm();
    CVector h = CVector::Zero(static_cast<Eigen::Index>(k + 2));
    for (std::size_t i = 0; i <= k; ++i) {
      const Complex coef = basis[i].dot(w);
      h[static_cast<Eigen::Index>(i)] = coef;
      w -= coef * basis[i];
    }
    double next = w.norm();
    if (next < pre_norm / std::sqrt(2.0)) {
      for (std::size_t i = 0; i <= k; ++i) {
        const Complex coef = basis[i].dot(w);
        h[static_cast<Eigen::Index>(i)] += coef;
        w -= coef * basis[i];
      }
      next = w.norm();
    }
    const auto kk = static_cast<Eigen::Index>(k);
    h[kk + 1] = next;

    for (std::size_t i = 0; i < k; ++i) {
      rotations[i].apply(h[static_cast<Eigen::Index>(i)], h[static_cast<Eigen::Index>(i) + 1]);
    }
    const Givens rot = make_givens(h[kk], h[kk + 1]);
    rot.apply(h[kk], h[kk + 1]);
    rotations.push_back(rot);
    g.push_back(0.0);
    rot.apply(g[k], g[k + 1]);
    hess.push_back(std::move(h));

    const double estimate = std::abs(g[k + 1]);
    report.precond_residual_history.push_back(estimate);
    report.iterations = k + 1;

    const bool breakdown = next == 0.0 || next <= 1e-14 * pre_norm;
    if (estimate <= options.tol || breakdown) {
      report.converged = true;
      report.happy_breakdown = breakdown;
      break;
    }
    if (previous - estimate < options.stagnation_ratio * previous) {
      if (++slow_steps >= options.stagnation_window) {
        report.stagnated = true;
        break;
      }
    } else {
      slow_steps = 0;
    }
    previous = estimate;
    basis.push_back(w / next);
  }

  // Back substitution on the rotated (upper triangular) Hessenberg system.
  const std::size_t m = report.iterations;
  std::vector<Complex> y(m);
  for (std::size_t ii = m; ii-- > 0;) {
    Complex sum = g[ii];
    for (std::size_t j = ii + 1; j < m; ++j) sum -= hess[j][static_cast<Eigen::Index>(ii)] * y[j];
    y[ii] = sum / hess[ii][static_cast<Eigen::Index>(ii)];
  }
  for (std::size_t j = 0; j < m; ++j) report.solution += y[j] * basis[j];

  const CVector residual = checked(apply_precond, b - checked(apply_op, report.solution, "apply_op"), "apply_precond");
  report.final_precond_residual = residual.norm();

  const std::size_t used = std::min(basis.size(), m);
  double loss = 0.0;
  for (std::size_t i = 0; i < used; ++i) {
    for (std::size_t j = i; j < used; ++j) {
      const Complex ip = basis[i].dot(basis[j]);
      loss = std::max(loss, std::abs(ip - (i == j ? Complex(1.0) : Complex(0.0))));
    }
  }
  report.orthogonality_loss = loss;
  return report;
}

}  // namespace toepexp
