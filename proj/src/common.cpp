#include "toepexp/common.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

namespace toepexp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DiagonalMismatch: return "DiagonalMismatch";
    case ErrorKind::DenseCapExceeded: return "DenseCapExceeded";
    case ErrorKind::SingularPreconditioner: return "SingularPreconditioner";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::XiZero: return "XiZero";
    case ErrorKind::SingularHessenberg: return "SingularHessenberg";
    case ErrorKind::UsedAfterBreakdown: return "UsedAfterBreakdown";
    case ErrorKind::ZeroReference: return "ZeroReference";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, std::string where, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + " in " + where + ": " + what),
      kind_(kind),
      where_(std::move(where)) {}

namespace {

std::size_t cap_from_env() {
  if (const char* env = std::getenv("TOEPEXP_DENSE_CAP")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end != env && value > 0) return static_cast<std::size_t>(value);
  }
  return 4096;
}

std::atomic<std::size_t>& cap_storage() {
  static std::atomic<std::size_t> cap{cap_from_env()};
  return cap;
}

}  // namespace

std::size_t dense_cap() { return cap_storage().load(std::memory_order_relaxed); }

void set_dense_cap(std::size_t cap) { cap_storage().store(cap, std::memory_order_relaxed); }

double two_norm_vec(const CVector& v) {
  // Scaled accumulation so huge or tiny entries do not overflow/underflow.
  double scale = 0.0;
  double ssq = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    for (const double part : {v[i].real(), v[i].imag()}) {
      const double a = std::abs(part);
      if (a == 0.0) continue;
      if (scale < a) {
        ssq = 1.0 + ssq * (scale / a) * (scale / a);
        scale = a;
      } else {
        ssq += (a / scale) * (a / scale);
      }
    }
  }
  return scale * std::sqrt(ssq);
}

double one_norm_vec(const CVector& v) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) sum += std::abs(v[i]);
  return sum;
}

}  // namespace toepexp
