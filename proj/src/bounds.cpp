#include "toepexp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "toepexp/dense.hpp"
#include "toepexp/gsf.hpp"

namespace toepexp {

namespace {

constexpr const char* kModule = "bounds_and_conditioning::";

double bracket(double eps, double eps_tilde) {
  return eps + (eps + (1.0 + eps) * eps_tilde) * (1.0 + eps);
}

double checked_abs_xi0(Complex xi0, const char* op) {
  const double a = std::abs(xi0);
  if (!(a > 0.0)) throw Error(ErrorKind::XiZero, std::string(kModule) + op, "xi0 = 0");
  return a;
}

double perturbation_norm(const CVector& v, PerturbationNorm kind) {
  return kind == PerturbationNorm::one_norm ? one_norm_vec(v) : two_norm_vec(v);
}

}  // namespace

double NormalStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * kScale;  // (0, 1]
  const double u2 = static_cast<double>(engine_() >> 11) * kScale;          // [0, 1)
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::pair<CVector, CVector> perturb_solutions(const CVector& x, const CVector& y, const PerturbationSpec& spec) {
  if (!(spec.epsilon >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, std::string(kModule) + "perturb_solutions", "epsilon must be >= 0");
  }
  NormalStream stream(spec.seed);
  auto perturb = [&](const CVector& v) {
    CVector f(v.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = Complex(stream.next(), 0.0);
    f /= perturbation_norm(f, spec.norm_kind);
    return CVector(v + (spec.epsilon * perturbation_norm(v, spec.norm_kind)) * f);
  };
  CVector x_tilde = perturb(x);
  CVector y_tilde = perturb(y);
  return {std::move(x_tilde), std::move(y_tilde)};
}

double relative_reciprocal_error(Complex xi0, Complex xi0_perturbed) {
  const Complex inv = 1.0 / xi0;
  return std::abs(inv - 1.0 / xi0_perturbed) / std::abs(inv);
}

double new_bound_abs_1norm(double eps, double eps_tilde, const CVector& x, const CVector& y, Complex xi0) {
  const double a = checked_abs_xi0(xi0, "new_bound_abs_1norm");
  return 2.0 / a * bracket(eps, eps_tilde) * one_norm_vec(x) * one_norm_vec(y);
}

double new_bound_rel_1norm(double eps, double eps_tilde, const CVector& x, const CVector& y, Complex xi0) {
  const double a = checked_abs_xi0(xi0, "new_bound_rel_1norm");
  return 2.0 / a * bracket(eps, eps_tilde) * std::min(one_norm_vec(x), one_norm_vec(y));
}

double new_bound_abs_2norm(double eps, double eps_tilde, const CVector& x, const CVector& y, Complex xi0) {
  return new_bound_abs_1norm(eps, eps_tilde, x, y, xi0);
}

double new_bound_rel_2norm(double eps, double eps_tilde, const CVector& x, const CVector& y, Complex xi0,
                           std::size_t n) {
  const double a = checked_abs_xi0(xi0, "new_bound_rel_2norm");
  return 2.0 * std::sqrt(static_cast<double>(n)) / a * bracket(eps, eps_tilde) *
         std::min(one_norm_vec(x), one_norm_vec(y));
}

double new_bound_rel_2norm_product(double eps, double eps_tilde, const CVector& x, const CVector& y, Complex xi0,
                                   std::size_t n) {
  const double a = checked_abs_xi0(xi0, "new_bound_rel_2norm_product");
  return 2.0 * std::sqrt(static_cast<double>(n)) / a * bracket(eps, eps_tilde) * one_norm_vec(x) * one_norm_vec(y);
}

double gh_bound_abs(double eps, const CVector& x, const CVector& y, Complex xi0, std::size_t n) {
  const double a = checked_abs_xi0(xi0, "gh_bound_abs");
  return 4.0 * static_cast<double>(n) / a * two_norm_vec(x) * two_norm_vec(y) * eps;
}

double gh_bound_rel(double eps, Complex xi0, std::size_t n, double inv_2norm) {
  const double a = checked_abs_xi0(xi0, "gh_bound_rel");
  return 4.0 * static_cast<double>(n) / a * inv_2norm * eps;
}

DenseInverseOracle DenseInverseOracle::build(const ToeplitzMatrix& t) {
  DenseInverseOracle oracle;
  oracle.inverse = dense::inverse(t.to_dense());
  oracle.one_norm = dense::one_norm(oracle.inverse);
  oracle.two_norm = dense::two_norm(oracle.inverse);
  return oracle;
}

InverseErrors true_inverse_errors(const DenseInverseOracle& oracle, const CVector& x_tilde, const CVector& y_tilde) {
  if (x_tilde.size() != oracle.inverse.rows()) {
    throw Error(ErrorKind::DimensionMismatch, std::string(kModule) + "true_inverse_errors", "size mismatch");
  }
  const CMatrix perturbed = GsfInverse::from_solutions(x_tilde, y_tilde).to_dense();
  const CMatrix diff = oracle.inverse - perturbed;
  InverseErrors e;
  e.abs_1norm = dense::one_norm(diff);
  e.abs_2norm = dense::two_norm(diff);
  e.rel_1norm = e.abs_1norm / oracle.one_norm;
  e.rel_2norm = e.abs_2norm / oracle.two_norm;
  return e;
}

InverseErrors true_inverse_errors(const ToeplitzMatrix& t, const CVector& x_tilde, const CVector& y_tilde) {
  return true_inverse_errors(DenseInverseOracle::build(t), x_tilde, y_tilde);
}

BoundReport evaluate_bounds(const DenseInverseOracle& oracle, const CVector& x, const CVector& y, double eps,
                            std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(x.size());
  const Complex xi0 = x[0];
  BoundReport r;
  r.n = n;
  r.eps = eps;

  const auto [x1, y1] = perturb_solutions(x, y, {eps, PerturbationNorm::one_norm, seed});
  r.eps_tilde = relative_reciprocal_error(xi0, x1[0]);
  r.abs_bound_1norm = new_bound_abs_1norm(eps, r.eps_tilde, x, y, xi0);
  r.rel_bound_1norm = new_bound_rel_1norm(eps, r.eps_tilde, x, y, xi0);
  r.abs_bound_2norm = new_bound_abs_2norm(eps, r.eps_tilde, x, y, xi0);
  r.rel_bound_2norm = new_bound_rel_2norm(eps, r.eps_tilde, x, y, xi0, n);
  r.rel_bound_2norm_product = new_bound_rel_2norm_product(eps, r.eps_tilde, x, y, xi0, n);
  r.gh_abs_bound_2norm = gh_bound_abs(eps, x, y, xi0, n);
  r.gh_rel_bound_2norm = gh_bound_rel(eps, xi0, n, oracle.two_norm);
  r.true_errors = true_inverse_errors(oracle, x1, y1);

  const auto [x2, y2] = perturb_solutions(x, y, {eps, PerturbationNorm::two_norm, seed});
  r.true_errors_2norm_perturbation = true_inverse_errors(oracle, x2, y2);
  return r;
}

}  // namespace toepexp
