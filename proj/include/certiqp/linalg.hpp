#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace certiqp {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const double& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  Vector column(std::size_t j) const;
  Vector diag() const;

  /// Largest absolute entry (0 for an empty matrix).
  double max_abs() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Lower-triangular L with L·Lᵀ = A. Entries above the diagonal are zero.
struct CholeskyFactor {
  std::size_t n = 0;
  Matrix lower;
};

/// Reads only the lower triangle of `a`; throws kNotPositiveDefinite on a
/// pivot that is not strictly positive.
CholeskyFactor cholesky_factor(const Matrix& a);

Vector cholesky_solve(const CholeskyFactor& f, std::span<const double> b);
void cholesky_solve_in_place(const CholeskyFactor& f, std::span<double> b);

Matrix spd_inverse(const Matrix& a);

/// M ← M + c·v·vᵀ. Only the lower triangle is computed; the upper half is
/// mirrored from it so the result is exactly symmetric.
void rank1_symmetric_update(Matrix& m, double c, std::span<const double> v);

/// Lower-triangle-only variant for matrices whose upper half is never read.
void rank1_update_lower(Matrix& m, double c, std::span<const double> v);

/// y = M·x using only the lower triangle of the symmetric M.
void symv_lower(const Matrix& m, std::span<const double> x, std::span<double> y);

/// Copies the lower triangle into the upper one.
void mirror_lower(Matrix& m);

Vector matvec(const Matrix& a, std::span<const double> x);
Vector matvec_transposed(const Matrix& a, std::span<const double> x);
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scaled(const Matrix& a, double s);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);
Vector add(std::span<const double> a, std::span<const double> b);
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector scaled(std::span<const double> a, double s);

/// ‖A − B‖∞ entrywise.
double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace certiqp
