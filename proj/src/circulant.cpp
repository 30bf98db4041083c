#include "toepexp/circulant.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace toepexp {

namespace {

constexpr double kSingularThreshold = 1e-300;

void check_length(const CVector& v, Eigen::Index n, const char* where) {
  if (v.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, where,
                "expected length " + std::to_string(n) + ", got " + std::to_string(v.size()));
  }
}

}  // namespace

CirculantOperator::CirculantOperator(CVector first_column, CVector eigenvalues,
                                     std::shared_ptr<const DftPlan> plan)
    : first_column_(std::move(first_column)), eigenvalues_(std::move(eigenvalues)), plan_(std::move(plan)) {}

CirculantOperator CirculantOperator::from_first_column(const CVector& first_column) {
  if (first_column.size() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "circulant_precond::from_first_column", "empty column");
  }
  auto plan = dft_plan(static_cast<std::size_t>(first_column.size()));
  CVector eigenvalues = plan->forward(first_column);
  double smallest = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) smallest = std::min(smallest, std::abs(eigenvalues[k]));
  if (!(smallest > kSingularThreshold)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", smallest);
    throw Error(ErrorKind::SingularPreconditioner, "circulant_precond::chan_preconditioner",
                std::string("smallest eigenvalue magnitude ") + buf);
  }
  return CirculantOperator(first_column, std::move(eigenvalues), std::move(plan));
}

CVector CirculantOperator::matvec(const CVector& v) const {
  check_length(v, size(), "circulant_precond::circ_matvec");
  CVector spectrum = plan_->forward(v);
  spectrum.array() *= eigenvalues_.array();
  return plan_->inverse(spectrum);
}

CVector CirculantOperator::solve(const CVector& b) const {
  check_length(b, size(), "circulant_precond::circ_solve");
  CVector spectrum = plan_->forward(b);
  spectrum.array() /= eigenvalues_.array();
  return plan_->inverse(spectrum);
}

ToeplitzMatrix CirculantOperator::as_toeplitz() const {
  const Eigen::Index n = size();
  CVector row(n);
  row[0] = first_column_[0];
  for (Eigen::Index k = 1; k < n; ++k) row[k] = first_column_[n - k];
  return ToeplitzMatrix::from_columns(first_column_, std::move(row));
}

CirculantOperator chan_preconditioner(const ToeplitzMatrix& t) {
  const Eigen::Index n = t.size();
  const double nd = static_cast<double>(n);
  CVector c(n);
  c[0] = t.first_col()[0];
  for (Eigen::Index k = 1; k < n; ++k) {
    const double kd = static_cast<double>(k);
    c[k] = ((nd - kd) * t.first_col()[k] + kd * t.first_row()[n - k]) / nd;
  }
  return CirculantOperator::from_first_column(c);
}

}  // namespace toepexp
