#include "toepexp/toeplitz.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

namespace toepexp {

namespace {

constexpr double kPi = std::numbers::pi;

void check_length(const CVector& v, Eigen::Index n, const char* where) {
  if (v.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, where,
                "expected length " + std::to_string(n) + ", got " + std::to_string(v.size()));
  }
}

Complex symbol_value(SymbolKind kind, double theta) {
  switch (kind) {
    case SymbolKind::theta_squared: return {theta * theta, 0.0};
    case SymbolKind::theta_squared_plus_i_theta_cubed: return {theta * theta, theta * theta * theta};
    case SymbolKind::parter: break;
  }
  return {0.0, 0.0};
}

// Fourier coefficients a_k, k = -(n-1) .. n-1, returned as (a_0..a_{n-1}) and
// (a_0, a_{-1}, .., a_{1-n}).
std::pair<CVector, CVector> quadrature_coefficients(SymbolKind kind, std::size_t n, std::size_t grid) {
  const std::size_t len = next_pow2(grid);
  CVector samples(static_cast<Eigen::Index>(len));
  for (std::size_t j = 0; j < len; ++j) {
    const double theta = -kPi + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(len);
    samples[static_cast<Eigen::Index>(j)] = symbol_value(kind, theta);
  }
  // The periodic extension jumps at theta = +-pi; the trapezoid rule takes the mean.
  samples[0] = 0.5 * (symbol_value(kind, -kPi) + symbol_value(kind, kPi));
  fft_plan(len)->forward(samples);

  const auto nn = static_cast<Eigen::Index>(n);
  const auto ll = static_cast<Eigen::Index>(len);
  const double inv = 1.0 / static_cast<double>(len);
  CVector pos(nn), neg(nn);
  for (Eigen::Index k = 0; k < nn; ++k) {
    // exp(-ik theta_j) = (-1)^k exp(-2 pi i jk / L)
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    pos[k] = sign * inv * samples[k];
    neg[k] = sign * inv * samples[k == 0 ? 0 : ll - k];
  }
  return {pos, neg};
}

std::pair<CVector, CVector> closed_form_coefficients(SymbolKind kind, std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n);
  CVector pos(nn), neg(nn);
  pos[0] = neg[0] = kPi * kPi / 3.0;
  for (Eigen::Index k = 1; k < nn; ++k) {
    const double kd = static_cast<double>(k);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double even = 2.0 * sign / (kd * kd);
    // i * (coefficient of theta^3) is real: -(-1)^k (pi^2/k - 6/k^3) for +k.
    const double odd = kind == SymbolKind::theta_squared
                           ? 0.0
                           : -sign * (kPi * kPi / kd - 6.0 / (kd * kd * kd));
    pos[k] = even + odd;
    neg[k] = even - odd;
  }
  return {pos, neg};
}

}  // namespace

std::string to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::theta_squared: return "theta2";
    case SymbolKind::theta_squared_plus_i_theta_cubed: return "theta2-itheta3";
    case SymbolKind::parter: return "parter";
  }
  return "unknown";
}

std::optional<SymbolKind> parse_symbol(const std::string& name) {
  if (name == "theta2") return SymbolKind::theta_squared;
  if (name == "theta2-itheta3") return SymbolKind::theta_squared_plus_i_theta_cubed;
  if (name == "parter") return SymbolKind::parter;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

CirculantEmbedding::CirculantEmbedding(const CVector& first_col, const CVector& first_row)
    : n_(first_col.size()) {
  const std::size_t len = next_pow2(static_cast<std::size_t>(2 * n_ - 1));
  plan_ = fft_plan(len);
  const auto ll = static_cast<Eigen::Index>(len);
  spectrum_ = CVector::Zero(ll);
  spectrum_.head(n_) = first_col;
  for (Eigen::Index k = 1; k < n_; ++k) spectrum_[ll - k] = first_row[k];
  plan_->forward(spectrum_);
}

CVector CirculantEmbedding::transform_padded(const CVector& v) const {
  CVector padded = CVector::Zero(static_cast<Eigen::Index>(length()));
  padded.head(n_) = v;
  plan_->forward(padded);
  return padded;
}

void CirculantEmbedding::multiply_spectrum(CVector& transformed) const {
  transformed.array() *= spectrum_.array();
}

CVector CirculantEmbedding::truncate_inverse(CVector transformed) const {
  plan_->inverse(transformed);
  return transformed.head(n_);
}

CVector CirculantEmbedding::apply(const CVector& v) const {
  CVector work = transform_padded(v);
  multiply_spectrum(work);
  return truncate_inverse(std::move(work));
}

// ---------------------------------------------------------------------------

ToeplitzMatrix::ToeplitzMatrix(CVector first_col, CVector first_row)
    : first_col_(std::move(first_col)),
      first_row_(std::move(first_row)),
      cache_(std::make_shared<Cache>()) {}

ToeplitzMatrix ToeplitzMatrix::from_columns(CVector first_col, CVector first_row) {
  constexpr const char* where = "toeplitz_core::from_columns";
  if (first_col.size() == 0 || first_col.size() != first_row.size()) {
    throw Error(ErrorKind::DimensionMismatch, where,
                "first column and first row must have equal nonzero length");
  }
  if (std::abs(first_col[0] - first_row[0]) > 1e-14) {
    throw Error(ErrorKind::DiagonalMismatch, where, "first_col[0] != first_row[0]");
  }
  first_row[0] = first_col[0];
  return ToeplitzMatrix(std::move(first_col), std::move(first_row));
}

ToeplitzMatrix ToeplitzMatrix::from_symbol(const SymbolSpec& spec, std::size_t n) {
  constexpr const char* where = "toeplitz_core::from_symbol";
  if (n == 0) throw Error(ErrorKind::InvalidArgument, where, "n must be positive");
  const auto nn = static_cast<Eigen::Index>(n);

  if (spec.kind == SymbolKind::parter) {
    CVector col(nn), row(nn);
    for (Eigen::Index k = 0; k < nn; ++k) {
      col[k] = 1.0 / (static_cast<double>(k) + 0.5);
      row[k] = 1.0 / (-static_cast<double>(k) + 0.5);
    }
    return ToeplitzMatrix(std::move(col), std::move(row));
  }

  if (spec.method == CoefficientMethod::closed_form) {
    auto [pos, neg] = closed_form_coefficients(spec.kind, n);
    return ToeplitzMatrix(std::move(pos), std::move(neg));
  }
  const std::size_t grid = spec.quadrature_size == 0 ? 8 * n : spec.quadrature_size;
  if (grid < 4 * n) {
    throw Error(ErrorKind::InvalidArgument, where, "quadrature_size must be at least 4n");
  }
  auto [pos, neg] = quadrature_coefficients(spec.kind, n, grid);
  if (spec.kind == SymbolKind::theta_squared) {
    // A real even symbol has real symmetric coefficients; drop the
    // quadrature roundoff so the matrix is exactly symmetric.
    pos = pos.real().cast<Complex>();
    neg = pos;
  }
  return ToeplitzMatrix(std::move(pos), std::move(neg));
}

ToeplitzMatrix ToeplitzMatrix::scaled_identity(std::size_t n, Complex value) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "toeplitz_core::scaled_identity", "n must be positive");
  CVector col = CVector::Zero(static_cast<Eigen::Index>(n));
  col[0] = value;
  CVector row = col;
  return ToeplitzMatrix(std::move(col), std::move(row));
}

const CirculantEmbedding& ToeplitzMatrix::embedding() const {
  std::call_once(cache_->once, [this] {
    cache_->embedding = std::make_unique<const CirculantEmbedding>(first_col_, first_row_);
    cache_->ready.store(true, std::memory_order_release);
  });
  return *cache_->embedding;
}

bool ToeplitzMatrix::has_cached_spectrum() const {
  return cache_->ready.load(std::memory_order_acquire);
}

CVector ToeplitzMatrix::matvec(const CVector& v) const {
  check_length(v, size(), "toeplitz_core::matvec");
  return embedding().apply(v);
}

CMatrix ToeplitzMatrix::to_dense() const {
  const Eigen::Index n = size();
  if (static_cast<std::size_t>(n) > dense_cap()) {
    throw Error(ErrorKind::DenseCapExceeded, "toeplitz_core::to_dense",
                "n = " + std::to_string(n) + " exceeds dense cap " + std::to_string(dense_cap()));
  }
  CMatrix dense(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) dense(i, j) = entry(i, j);
  }
  return dense;
}

double ToeplitzMatrix::one_norm() const {
  const Eigen::Index n = size();
  // Column j holds t_{-j} .. t_{-1} above the diagonal and t_0 .. t_{n-1-j} on
  // and below it.
  std::vector<double> col_prefix(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> row_prefix(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index k = 0; k < n; ++k) col_prefix[k + 1] = col_prefix[k] + std::abs(first_col_[k]);
  for (Eigen::Index k = 1; k < n; ++k) row_prefix[k] = row_prefix[k - 1] + std::abs(first_row_[k]);
  double best = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    best = std::max(best, row_prefix[j] + col_prefix[n - j]);
  }
  return best;
}

double ToeplitzMatrix::one_norm_proxy() const {
  return std::max(one_norm_vec(first_col_), one_norm_vec(first_row_));
}

double ToeplitzMatrix::colrow_two_norm() const {
  return std::max(two_norm_vec(first_col_), two_norm_vec(first_row_));
}

ToeplitzMatrix ToeplitzMatrix::shifted(double gamma) const {
  CVector col = gamma * first_col_;
  CVector row = gamma * first_row_;
  col[0] += 1.0;
  row[0] = col[0];
  return ToeplitzMatrix(std::move(col), std::move(row));
}

ToeplitzMatrix ToeplitzMatrix::scaled(Complex alpha) const {
  return ToeplitzMatrix(alpha * first_col_, alpha * first_row_);
}

CVector dense_toeplitz_matvec(const ToeplitzMatrix& t, const CVector& v) {
  const Eigen::Index n = t.size();
  check_length(v, n, "toeplitz_core::dense_toeplitz_matvec");
  CVector out = CVector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) sum += t.entry(i, j) * v[j];
    out[i] = sum;
  }
  return out;
}

// ---------------------------------------------------------------------------

void write_toeplitz(std::ostream& out, const ToeplitzMatrix& t) {
  char buf[96];
  out << t.size() << '\n';
  for (const CVector* v : {&t.first_col(), &t.first_row()}) {
    for (Eigen::Index k = 0; k < v->size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", (*v)[k].real(), (*v)[k].imag());
      out << buf;
    }
  }
}

ToeplitzMatrix read_toeplitz(std::istream& in) {
  constexpr const char* where = "toeplitz_core::read_toeplitz";
  long long n = 0;
  if (!(in >> n) || n <= 0) throw Error(ErrorKind::Io, where, "missing or invalid dimension line");
  auto read_vec = [&](const char* what) {
    CVector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) {
        throw Error(ErrorKind::Io, where, std::string("truncated ") + what + " at entry " + std::to_string(k));
      }
      v[k] = Complex(re, im);
    }
    return v;
  };
  CVector col = read_vec("first column");
  CVector row = read_vec("first row");
  return ToeplitzMatrix::from_columns(std::move(col), std::move(row));
}

ToeplitzMatrix load_toeplitz(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "toeplitz_core::load_toeplitz", "cannot open " + path);
  return read_toeplitz(in);
}

void save_toeplitz(const std::string& path, const ToeplitzMatrix& t) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "toeplitz_core::save_toeplitz", "cannot open " + path);
  write_toeplitz(out, t);
}

}  // namespace toepexp
