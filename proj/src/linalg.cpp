#include "certiqp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "certiqp/error.hpp"

namespace certiqp {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::kDimensionMismatch, what);
}

// Four partial sums so the reduction pipelines without -ffast-math.
double dot_unrolled(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  double s = (s0 + s1) + (s2 + s3);
  for (; k < n; ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::kInvalidParameter: return "InvalidParameter";
    case ErrorKind::kAsymmetricH: return "AsymmetricH";
    case ErrorKind::kNotPsd: return "NotPSD";
    case ErrorKind::kSingularUpdate: return "SingularUpdate";
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kInvalidLabels: return "InvalidLabels";
    case ErrorKind::kInvalidBounds: return "InvalidBounds";
    case ErrorKind::kIntractable: return "Intractable";
    case ErrorKind::kParse: return "ParseError";
  }
  return "Unknown";
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require(r.size() == cols_, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

Vector Matrix::diag() const {
  Vector d(std::min(rows_, cols_));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i);
  return d;
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

CholeskyFactor cholesky_factor(const Matrix& a) {
  require(a.square(), "cholesky_factor: matrix is not square");
  const std::size_t n = a.rows();
  CholeskyFactor f{n, Matrix(n, n)};
  Matrix& l = f.lower;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) l(i, j) = a(i, j);
  }
  // Row-oriented left-looking variant: every inner product runs over two
  // contiguous row prefixes.
  for (std::size_t j = 0; j < n; ++j) {
    double* lj = &l(j, 0);
    const double pivot = lj[j] - dot_unrolled(lj, lj, j);
    if (!(pivot > 0.0)) {
      throw Error(ErrorKind::kNotPositiveDefinite,
                  "non-positive pivot " + std::to_string(pivot) + " at index " + std::to_string(j));
    }
    const double root = std::sqrt(pivot);
    lj[j] = root;
    const double inv = 1.0 / root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double* li = &l(i, 0);
      li[j] = (li[j] - dot_unrolled(li, lj, j)) * inv;
    }
  }
  return f;
}

void cholesky_solve_in_place(const CholeskyFactor& f, std::span<double> b) {
  require(b.size() == f.n, "cholesky_solve: right-hand side has wrong length");
  const std::size_t n = f.n;
  const Matrix& l = f.lower;
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = (b[i] - dot_unrolled(&l(i, 0), b.data(), i)) / l(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    b[ii] /= l(ii, ii);
    const double bi = b[ii];
    for (std::size_t k = 0; k < ii; ++k) b[k] -= l(ii, k) * bi;
  }
}

Vector cholesky_solve(const CholeskyFactor& f, std::span<const double> b) {
  Vector x(b.begin(), b.end());
  cholesky_solve_in_place(f, x);
  return x;
}

Matrix spd_inverse(const Matrix& a) {
  const CholeskyFactor f = cholesky_factor(a);
  const std::size_t n = f.n;
  Matrix inv(n, n);
  Vector col(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(col.begin(), col.end(), 0.0);
    col[j] = 1.0;
    cholesky_solve_in_place(f, col);
    for (std::size_t i = j; i < n; ++i) inv(i, j) = col[i];
  }
  mirror_lower(inv);
  return inv;
}

void rank1_update_lower(Matrix& m, double c, std::span<const double> v) {
  require(m.square() && v.size() == m.rows(), "rank1 update: dimension mismatch");
  if (c == 0.0) return;
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    const double s = c * v[i];
    if (s == 0.0) continue;
    double* mi = &m(i, 0);
    for (std::size_t j = 0; j <= i; ++j) mi[j] += s * v[j];
  }
}

void rank1_symmetric_update(Matrix& m, double c, std::span<const double> v) {
  rank1_update_lower(m, c, v);
  mirror_lower(m);
}

void mirror_lower(Matrix& m) {
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) m(j, i) = m(i, j);
  }
}

void symv_lower(const Matrix& m, std::span<const double> x, std::span<double> y) {
  require(m.square() && x.size() == m.rows() && y.size() == m.rows(),
          "symv: dimension mismatch");
  const std::size_t n = m.rows();
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* mi = &m(i, 0);
    const double xi = x[i];
    double acc = dot_unrolled(mi, x.data(), i);
    for (std::size_t j = 0; j < i; ++j) y[j] += mi[j] * xi;
    y[i] += acc + mi[i] * xi;
  }
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  require(x.size() == a.cols(), "matvec: dimension mismatch");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot_unrolled(&a(i, 0), x.data(), a.cols());
  return y;
}

Vector matvec_transposed(const Matrix& a, std::span<const double> x) {
  require(x.size() == a.rows(), "matvec_transposed: dimension mismatch");
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double xi = x[i];
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * xi;
  }
  return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matmul: dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = &c(i, 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* bk = &b(k, 0);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

Matrix add(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "add: dimension mismatch");
  Matrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t k = 0; k < cd.size(); ++k) cd[k] += bd[k];
  return c;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "subtract: dimension mismatch");
  Matrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t k = 0; k < cd.size(); ++k) cd[k] -= bd[k];
  return c;
}

Matrix scaled(const Matrix& a, double s) {
  Matrix c = a;
  for (double& v : c.data()) v *= s;
  return c;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "dot: dimension mismatch");
  return dot_unrolled(a.data(), b.data(), a.size());
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

Vector add(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "add: dimension mismatch");
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "subtract: dimension mismatch");
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

Vector scaled(std::span<const double> a, double s) {
  Vector c(a.begin(), a.end());
  for (double& v : c) v *= s;
  return c;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff: dimension mismatch");
  return max_abs_diff(a.data(), b.data());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace certiqp
