#include "toepexp/krylov_expm.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "toepexp/dense.hpp"

namespace toepexp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

ArnoldiState::ArnoldiState(const CVector& v, double gamma) : gamma_(gamma) {
  constexpr const char* where = "krylov_expm::arnoldi_step";
  if (!(gamma > 0.0)) throw Error(ErrorKind::InvalidArgument, where, "gamma must be positive");
  beta_ = two_norm_vec(v);
  if (!(beta_ > 0.0)) throw Error(ErrorKind::InvalidArgument, where, "starting vector has zero norm");
  basis_.push_back(v / beta_);
}

void ArnoldiState::step(const LinearOperator& apply_shifted_inverse) {
  constexpr const char* where = "krylov_expm::arnoldi_step";
  if (breakdown_) throw Error(ErrorKind::UsedAfterBreakdown, where, "Arnoldi process already broke down");
  const std::size_t m = steps();
  CVector w = apply_shifted_inverse(basis_[m]);
  if (w.size() != dimension()) {
    throw Error(ErrorKind::DimensionMismatch, where,
                "operator returned length " + std::to_string(w.size()) + ", expected " + std::to_string(dimension()));
  }

  CVector h = CVector::Zero(static_cast<Eigen::Index>(m + 2));
  const double w_norm = two_norm_vec(w);
  for (std::size_t i = 0; i <= m; ++i) {
    const Complex c = basis_[i].dot(w);
    h[static_cast<Eigen::Index>(i)] = c;
    w -= c * basis_[i];
  }
  double remainder = two_norm_vec(w);
  if (remainder < w_norm / std::sqrt(2.0)) {
    for (std::size_t i = 0; i <= m; ++i) {
      const Complex c = basis_[i].dot(w);
      h[static_cast<Eigen::Index>(i)] += c;
      w -= c * basis_[i];
    }
    remainder = two_norm_vec(w);
  }

  if (remainder <= 1e-14 * w_norm) {
    breakdown_ = true;
    last_subdiagonal_ = 0.0;
    h[static_cast<Eigen::Index>(m + 1)] = 0.0;
  } else {
    last_subdiagonal_ = remainder;
    h[static_cast<Eigen::Index>(m + 1)] = remainder;
    basis_.push_back(w / remainder);
  }
  hess_cols_.push_back(std::move(h));
}

CMatrix ArnoldiState::basis() const {
  const auto m = static_cast<Eigen::Index>(steps());
  CMatrix v(dimension(), m);
  for (Eigen::Index j = 0; j < m; ++j) v.col(j) = basis_[static_cast<std::size_t>(j)];
  return v;
}

CMatrix ArnoldiState::hessenberg() const {
  const auto m = static_cast<Eigen::Index>(steps());
  CMatrix h = CMatrix::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const CVector& col = hess_cols_[static_cast<std::size_t>(j)];
    const Eigen::Index rows = std::min<Eigen::Index>(col.size(), m);
    h.col(j).head(rows) = col.head(rows);
  }
  return h;
}

CMatrix ArnoldiState::full_hessenberg() const {
  const auto m = static_cast<Eigen::Index>(steps());
  CMatrix h = CMatrix::Zero(m + 1, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const CVector& col = hess_cols_[static_cast<std::size_t>(j)];
    h.col(j).head(col.size()) = col;
  }
  return h;
}

namespace {

template <typename Matrix>
Matrix pade13_expm(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "krylov_expm::small_expm", "matrix must be square");
  }
  const Eigen::Index k = m.rows();
  if (k == 0) return m;
  if (m.isZero(0.0)) return Matrix::Identity(k, k);
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0, 129060195264000.0,
      10559470521600.0,    670442572800.0,      33522128640.0,      1323241920.0,       40840800.0,
      960960.0,            16380.0,             182.0,              1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm > theta13) s = static_cast<int>(std::ceil(std::log2(norm / theta13)));
  const Matrix a = m / std::ldexp(1.0, s);
  const Matrix ident = Matrix::Identity(k, k);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  const Matrix u = a * u_inner;
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < s; ++i) r = r * r;
  return r;
}

}  // namespace

CMatrix small_expm(const CMatrix& m) { return pade13_expm(m); }

Eigen::MatrixXd small_expm(const Eigen::MatrixXd& m) { return pade13_expm(m); }

SmallCoefficients small_coeffs(const CMatrix& h_m, double t, double gamma, double beta) {
  constexpr const char* where = "krylov_expm::small_coeffs";
  const Eigen::Index m = h_m.rows();
  if (m == 0 || h_m.cols() != m) throw Error(ErrorKind::DimensionMismatch, where, "H_m must be square and nonempty");
  if (!(gamma > 0.0)) throw Error(ErrorKind::InvalidArgument, where, "gamma must be positive");
  const Eigen::PartialPivLU<CMatrix> lu(h_m);
  // The rcond estimate is unreliable for exactly zero pivots, so those are
  // checked first.
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double rcond = pivots.minCoeff() == 0.0 ? 0.0 : lu.rcond();
  if (!(rcond >= 1e-14)) {
    throw Error(ErrorKind::SingularHessenberg, where,
                "H_" + std::to_string(m) + " is singular to working precision (rcond = " + std::to_string(rcond) + ")");
  }
  SmallCoefficients out;
  out.h_inv = lu.inverse();
  const CMatrix shifted = out.h_inv - CMatrix::Identity(m, m);
  const CMatrix e = small_expm(CMatrix((-t / gamma) * shifted));
  out.u = beta * e.col(0);
  out.u_prime = (-1.0 / gamma) * (shifted * out.u);
  out.h_inv_u = out.h_inv * out.u;
  return out;
}

double computed_residual_norm(const ArnoldiState& state, const SmallCoefficients& coeffs,
                              const ToeplitzMatrix& t_shifted) {
  if (state.breakdown() || state.steps() == 0) return 0.0;
  const std::size_t m = state.steps();
  const Complex scalar = state.subdiagonal() / state.gamma() * coeffs.h_inv_u[static_cast<Eigen::Index>(m - 1)];
  return std::abs(scalar) * two_norm_vec(t_shifted.matvec(state.basis_vector(m)));
}

ExpmResult approx_exponential(const ToeplitzMatrix& t_shifted, const LinearOperator& inverse_apply, const CVector& v,
                              double t, double gamma, const ExpmOptions& options) {
  constexpr const char* where = "krylov_expm::approx_exponential";
  if (!(options.tol_exp > 0.0)) throw Error(ErrorKind::InvalidArgument, where, "tol_exp must be positive");
  if (options.m_max < 1) throw Error(ErrorKind::InvalidArgument, where, "m_max must be >= 1");
  if (v.size() != t_shifted.size()) {
    throw Error(ErrorKind::DimensionMismatch, where, "v and T have different sizes");
  }

  ExpmResult result;
  result.tol_exp_used = options.tol_exp;
  result.tol_sys_used = options.tol_sys;

  ArnoldiState state(v, gamma);
  SmallCoefficients coeffs;
  while (state.steps() < options.m_max) {
    auto start = Clock::now();
    state.step(inverse_apply);
    result.arnoldi_seconds += seconds_since(start);

    start = Clock::now();
    try {
      coeffs = small_coeffs(state.hessenberg(), t, gamma, state.beta());
    } catch (const Error& e) {
      throw Error(e.kind(), where, "step " + std::to_string(state.steps()) + ": " + e.what());
    }
    result.small_expm_seconds += seconds_since(start);

    start = Clock::now();
    const double residual = computed_residual_norm(state, coeffs, t_shifted);
    result.arnoldi_seconds += seconds_since(start);
    result.residual_history.push_back(residual);
    if (state.breakdown() || residual <= options.tol_exp) {
      result.converged = true;
      break;
    }
  }

  const std::size_t m = state.steps();
  result.m = m;
  result.breakdown = state.breakdown();
  result.u = coeffs.u;
  result.u_norm = two_norm_vec(coeffs.u);
  result.h_inv_2norm = dense::two_norm(coeffs.h_inv);

  CVector y = CVector::Zero(state.dimension());
  for (std::size_t j = 0; j < m; ++j) y += coeffs.u[static_cast<Eigen::Index>(j)] * state.basis_vector(j);
  result.y = std::move(y);

  if (options.retain_basis) {
    result.has_basis = true;
    result.basis = state.basis();
    result.next_vector = state.breakdown() ? CVector(CVector::Zero(state.dimension())) : state.basis_vector(m);
    result.u_prime = coeffs.u_prime;
    result.residual_scalar = state.subdiagonal() / gamma * coeffs.h_inv_u[static_cast<Eigen::Index>(m - 1)];
  }
  return result;
}

}  // namespace toepexp
