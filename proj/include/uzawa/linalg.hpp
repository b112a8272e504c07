#pragma once

// Dense linear algebra kernel: SPD factorization, triangular solves,
// matrix-vector products and extremal eigen/singular value estimates.
//
// All matrices store their entries row-major in a flat std::vector<double>:
// entry (i, j) lives at index i * cols + j.

#include <cstddef>
#include <span>
#include <vector>

namespace uzawa {

using Vector = std::vector<double>;

/// Dense symmetric matrix in full square storage. Every mutation writes both
/// (i, j) and (j, i), so the stored entries are exactly symmetric.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t dim);

  /// Copies a full row-major square array. Throws DimensionMismatch if the
  /// size is not dim * dim and InvalidSpec if the input is not exactly
  /// symmetric.
  static SymMatrix from_row_major(std::size_t dim, std::span<const double> values);
  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(std::span<const double> diag);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }

  void set(std::size_t i, std::size_t j, double value) noexcept;
  void add(std::size_t i, std::size_t j, double value) noexcept;

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * dim_, dim_};
  }
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols);

  static DenseMatrix from_row_major(std::size_t rows, std::size_t cols,
                                    std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Lower-triangular L with A = L * L^T. Only the lower triangle (including the
/// strictly positive diagonal) is meaningful; the upper triangle is zero.
class CholeskyFactor {
 public:
  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return lower_[i * dim_ + j]; }

 private:
  friend CholeskyFactor cholesky_factorize(const SymMatrix& a);
  CholeskyFactor(std::size_t dim, std::vector<double> lower)
      : dim_(dim), lower_(std::move(lower)) {}

  std::size_t dim_;
  std::vector<double> lower_;
};

/// Throws NotPositiveDefinite (index = pivot) when a pivot falls to
/// 1e-14 * max diagonal or below.
CholeskyFactor cholesky_factorize(const SymMatrix& a);

/// Forward then backward substitution with the stored factor.
Vector cholesky_solve(const CholeskyFactor& factor, std::span<const double> b);

Vector matvec(const DenseMatrix& m, std::span<const double> x);
Vector matvec(const SymMatrix& m, std::span<const double> x);
Vector matvec_transpose(const DenseMatrix& m, std::span<const double> y);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);

struct EigenOptions {
  double tol = 1e-8;
  std::size_t max_iter = 10000;
};

/// Smallest eigenvalue of an SPD matrix by inverse power iteration.
double min_eigenvalue(const SymMatrix& a, EigenOptions opts = {});
/// Same, reusing an existing factorization of the matrix.
double min_eigenvalue(const CholeskyFactor& factor, EigenOptions opts = {});

/// Largest singular value of N via power iteration on the Gram matrix N N^T.
double max_singular_value(const DenseMatrix& n, EigenOptions opts = {});

}  // namespace uzawa
