#include "toepexp/gsf.hpp"

#include <algorithm>
#include <cmath>

#include "toepexp/circulant.hpp"

namespace toepexp {

struct GsfInverse::Factors {
  CirculantEmbedding lower_x;   // L_x
  CirculantEmbedding upper_y;   // R_y
  CirculantEmbedding lower_y0;  // L_y^0
  CirculantEmbedding upper_x0;  // R_x^0
};

namespace {

CVector zeros_with_head(Eigen::Index n, Complex head) {
  CVector v = CVector::Zero(n);
  v[0] = head;
  return v;
}

}  // namespace

GsfInverse::GsfInverse(CVector x, CVector y, std::shared_ptr<const Factors> factors)
    : x_(std::move(x)), y_(std::move(y)), factors_(std::move(factors)) {}

GsfInverse GsfInverse::from_solutions(CVector x, CVector y) {
  constexpr const char* where = "gsf_inverse::build_gsf";
  const Eigen::Index n = x.size();
  if (n == 0 || y.size() != n) throw Error(ErrorKind::DimensionMismatch, where, "x and y must have equal nonzero length");
  if (!(std::abs(x[0]) > 1e-12 * x.norm())) {
    throw Error(ErrorKind::XiZero, where, "xi0 = x[0] vanishes relative to ||x||_2");
  }

  // L_x: column x. R_y: row (eta_{n-1}, ..., eta_0).
  // L_y^0: column (0, eta_0, ..., eta_{n-2}). R_x^0: row (0, xi_{n-1}, ..., xi_1).
  CVector ry_row = y.reverse();
  CVector ly0_col = CVector::Zero(n);
  ly0_col.tail(n - 1) = y.head(n - 1);
  CVector rx0_row = CVector::Zero(n);
  for (Eigen::Index k = 1; k < n; ++k) rx0_row[k] = x[n - k];

  auto factors = std::make_shared<const Factors>(Factors{
      CirculantEmbedding(x, zeros_with_head(n, x[0])),
      CirculantEmbedding(zeros_with_head(n, y[n - 1]), ry_row),
      CirculantEmbedding(ly0_col, CVector::Zero(n)),
      CirculantEmbedding(CVector::Zero(n), rx0_row),
  });
  return GsfInverse(std::move(x), std::move(y), std::move(factors));
}

CVector GsfInverse::apply(const CVector& v) const {
  const Eigen::Index n = size();
  if (v.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "gsf_inverse::apply_inverse",
                "expected length " + std::to_string(n) + ", got " + std::to_string(v.size()));
  }
  const Factors& f = *factors_;
  const CVector v_hat = f.upper_y.transform_padded(v);

  CVector first = v_hat;
  f.upper_y.multiply_spectrum(first);
  first = f.lower_x.transform_padded(f.upper_y.truncate_inverse(std::move(first)));
  f.lower_x.multiply_spectrum(first);

  CVector second = v_hat;
  f.upper_x0.multiply_spectrum(second);
  second = f.lower_y0.transform_padded(f.upper_x0.truncate_inverse(std::move(second)));
  f.lower_y0.multiply_spectrum(second);

  first -= second;
  CVector out = f.lower_x.truncate_inverse(std::move(first));
  out /= xi0();
  return out;
}

CVector GsfInverse::apply_adjoint(const CVector& v) const {
  const Eigen::Index n = size();
  if (v.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "gsf_inverse::apply_adjoint",
                "expected length " + std::to_string(n) + ", got " + std::to_string(v.size()));
  }
  // Each factor is the leading n x n block of a circulant; the adjoint of the
  // block is the block of the adjoint circulant, whose spectrum is conjugated.
  const Factors& f = *factors_;
  auto adjoint_apply = [](const CirculantEmbedding& e, const CVector& w) {
    CVector hat = e.transform_padded(w);
    hat.array() *= e.spectrum().conjugate().array();
    return e.truncate_inverse(std::move(hat));
  };
  CVector out = adjoint_apply(f.upper_y, adjoint_apply(f.lower_x, v));
  out -= adjoint_apply(f.upper_x0, adjoint_apply(f.lower_y0, v));
  out /= std::conj(xi0());
  return out;
}

CMatrix GsfInverse::to_dense() const {
  const Eigen::Index n = size();
  if (static_cast<std::size_t>(n) > dense_cap()) {
    throw Error(ErrorKind::DenseCapExceeded, "gsf_inverse::to_dense",
                "n = " + std::to_string(n) + " exceeds dense cap " + std::to_string(dense_cap()));
  }
  const Complex inv_xi0 = 1.0 / xi0();
  CMatrix d(n, n);
  for (Eigen::Index j = 0; j < n; ++j) d(0, j) = y_[n - 1 - j];
  for (Eigen::Index i = 1; i < n; ++i) d(i, 0) = x_[i] * y_[n - 1] * inv_xi0;
  // Column-major sweep: d(i+1, j+1) from d(i, j).
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    const Complex xi_tail = x_[n - 1 - j];
    const Complex eta_tail = y_[n - 2 - j];
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      d(i + 1, j + 1) = d(i, j) + (x_[i + 1] * eta_tail - y_[i] * xi_tail) * inv_xi0;
    }
  }
  return d;
}

GsfInverse build_gsf(const ToeplitzMatrix& t, double tol_sys, std::size_t max_iter) {
  constexpr const char* where = "gsf_inverse::build_gsf";
  if (!(tol_sys > 0.0)) throw Error(ErrorKind::InvalidArgument, where, "tol_sys must be positive");
  const Eigen::Index n = t.size();
  const CirculantOperator precond = chan_preconditioner(t);
  const LinearOperator op = [&t](const CVector& v) { return t.matvec(v); };
  const LinearOperator pre = [&precond](const CVector& v) { return precond.solve(v); };
  GmresOptions options;
  options.tol = tol_sys;
  options.max_iter = max_iter;

  auto solve = [&](Eigen::Index unit, const char* label) {
    CVector rhs = CVector::Zero(n);
    rhs[unit] = 1.0;
    SolveReport report = gmres(op, pre, rhs, options);
    if (!report.converged) {
      throw SolverFailure(where,
                          std::string("GMRES did not reach tol_sys for ") + label + " after " +
                              std::to_string(report.iterations) + " iterations",
                          std::move(report));
    }
    return report;
  };
  SolveReport x_report = solve(0, "Tx = e_1");
  SolveReport y_report = solve(n - 1, "Ty = e_n");

  GsfInverse g = GsfInverse::from_solutions(x_report.solution, y_report.solution);
  g.x_report_ = std::move(x_report);
  g.y_report_ = std::move(y_report);
  return g;
}

double inverse_two_norm_estimate(const GsfInverse& g, std::size_t iterations) {
  CVector w = CVector::Ones(g.size());
  w /= two_norm_vec(w);
  double estimate = 0.0;
  for (std::size_t k = 0; k < iterations; ++k) {
    const CVector z = g.apply_adjoint(w);
    const CVector next = g.apply(z);
    // ||T^{-H} w||_2 with ||w||_2 = 1 is a lower bound on ||T^{-1}||_2.
    estimate = std::max(estimate, two_norm_vec(z));
    const double norm = two_norm_vec(next);
    if (!(norm > 0.0)) break;
    w = next / norm;
  }
  return estimate;
}

std::string to_string(NormMode mode) {
  return mode == NormMode::exact_1norm ? "exact_1norm" : "colrow_proxy";
}

GsfConditionNumbers gsf_condition_number(const GsfInverse& g, const ToeplitzMatrix& t, NormMode mode) {
  constexpr const char* where = "gsf_inverse::gsf_condition_number";
  if (g.size() != t.size()) throw Error(ErrorKind::DimensionMismatch, where, "GSF and matrix sizes differ");
  const double abs_xi0 = std::abs(g.xi0());
  if (!(abs_xi0 > 0.0)) throw Error(ErrorKind::XiZero, where, "xi0 = 0");
  GsfConditionNumbers out;
  out.mode = mode;
  out.t_norm = mode == NormMode::exact_1norm ? t.one_norm() : t.one_norm_proxy();
  const double x1 = one_norm_vec(g.x());
  const double y1 = one_norm_vec(g.y());
  out.kappa_eff_1 = out.t_norm * y1;
  out.kappa_eff_2_estimate = x1 / abs_xi0;
  out.kappa_gsf = out.kappa_eff_1 / (abs_xi0 / x1);
  return out;
}

}  // namespace toepexp
