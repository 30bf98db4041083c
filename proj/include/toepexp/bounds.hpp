#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "toepexp/common.hpp"
#include "toepexp/toeplitz.hpp"

namespace toepexp {

enum class PerturbationNorm { one_norm, two_norm };

struct PerturbationSpec {
  double epsilon = 0.0;
  PerturbationNorm norm_kind = PerturbationNorm::one_norm;
  std::uint64_t seed = 0;
};

/// Standard normal draws from std::mt19937_64 through the Box-Muller
/// transform, so a seed reproduces the same sequence on every platform.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
  double next();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// x~ = x + eps ||x|| f and y~ = y + eps ||y|| g, with f and g independent
/// real standard-normal vectors normalized in the chosen norm. f is drawn
/// first, then g, from one stream seeded with `spec.seed`.
std::pair<CVector, CVector> perturb_solutions(const CVector& x, const CVector& y, const PerturbationSpec& spec);

/// |1/xi0 - 1/xi0~| / |1/xi0|.
double relative_reciprocal_error(Complex xi0, Complex xi0_perturbed);

/// |2/xi0| [eps + (eps + (1 + eps) eps~)(1 + eps)] ||x||_1 ||y||_1. Errors: XiZero.
double new_bound_abs_1norm(double eps, double eps_tilde, const CVector& x, const CVector& y, Complex xi0);
/// Same bracket times min{||x||_1, ||y||_1}. Errors: XiZero.
double new_bound_rel_1norm(double eps, double eps_tilde, const CVector& x, const CVector& y, Complex xi0);
/// Identical expression to new_bound_abs_1norm.
double new_bound_abs_2norm(double eps, double eps_tilde, const CVector& x, const CVector& y, Complex xi0);
/// |2 sqrt(n) / xi0| [...] min{||x||_1, ||y||_1}. Errors: XiZero.
double new_bound_rel_2norm(double eps, double eps_tilde, const CVector& x, const CVector& y, Complex xi0,
                           std::size_t n);

/// |2 sqrt(n) / xi0| [...] ||x||_1 ||y||_1: the relative 2-norm expression
/// with the product of the solution norms in place of their minimum, i.e.
/// sqrt(n) times the absolute bound. Published relative-bound tables follow
/// this form; it is reported alongside, never substituted for, the min form.
double new_bound_rel_2norm_product(double eps, double eps_tilde, const CVector& x, const CVector& y, Complex xi0,
                                   std::size_t n);

/// Comparison bounds with the machine-precision terms dropped:
///   abs: |4n / xi0| ||x||_2 ||y||_2 eps
///   rel: |4n / xi0| ||T^{-1}||_2 eps
double gh_bound_abs(double eps, const CVector& x, const CVector& y, Complex xi0, std::size_t n);
double gh_bound_rel(double eps, Complex xi0, std::size_t n, double inv_2norm);

struct InverseErrors {
  double abs_1norm = 0.0;
  double abs_2norm = 0.0;
  double rel_1norm = 0.0;
  double rel_2norm = 0.0;
};

/// Dense T^{-1} with its 1- and 2-norms, computed once and reused across cells.
struct DenseInverseOracle {
  CMatrix inverse;
  double one_norm = 0.0;
  double two_norm = 0.0;

  /// Errors: DenseCapExceeded.
  static DenseInverseOracle build(const ToeplitzMatrix& t);
};

/// ||T^{-1} - T~^{-1}|| in the 1- and 2-norms, absolute and relative, with T~^{-1}
/// the GSF assembled from (x~, y~). Errors: XiZero, DenseCapExceeded.
InverseErrors true_inverse_errors(const DenseInverseOracle& oracle, const CVector& x_tilde, const CVector& y_tilde);
InverseErrors true_inverse_errors(const ToeplitzMatrix& t, const CVector& x_tilde, const CVector& y_tilde);

struct BoundReport {
  std::size_t n = 0;
  double eps = 0.0;
  double eps_tilde = 0.0;
  double abs_bound_1norm = 0.0;
  double rel_bound_1norm = 0.0;
  double abs_bound_2norm = 0.0;
  double rel_bound_2norm = 0.0;
  double rel_bound_2norm_product = 0.0;
  double gh_abs_bound_2norm = 0.0;
  double gh_rel_bound_2norm = 0.0;
  /// Errors for the 1-norm perturbation, the one satisfying the new bounds' hypothesis.
  InverseErrors true_errors;
  /// Errors for the 2-norm perturbation, the one the comparison bounds assume.
  InverseErrors true_errors_2norm_perturbation;
};

/// Evaluates every bound for one (eps, seed) cell. `x`, `y` are the accurate
/// fundamental solutions of T. Both perturbations use the same seed.
BoundReport evaluate_bounds(const DenseInverseOracle& oracle, const CVector& x, const CVector& y, double eps,
                            std::uint64_t seed);

}  // namespace toepexp
