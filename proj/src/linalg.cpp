#include "uzawa/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uzawa/error.hpp"

namespace uzawa {

namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": expected length " + std::to_string(want) + ", got " +
                    std::to_string(got));
  }
}

void normalize(Vector& x) {
  const double n = norm2(x);
  for (double& v : x) v /= n;
}

// Generic power iteration on a symmetric operator. Returns the converged
// Rayleigh quotient. A start vector that the operator annihilates (or that is
// orthogonal to the dominant eigenvector and collapses to zero) gets its first
// component perturbed by 1e-3 and the iteration restarts once.
template <class Apply>
double power_iterate(std::size_t n, Apply&& apply, EigenOptions opts) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    Vector x(n, 1.0);
    if (attempt == 1) x[0] += 1e-3;
    normalize(x);

    double rayleigh = 0.0;
    bool stagnated = false;
    for (std::size_t it = 0; it < opts.max_iter; ++it) {
      Vector y = apply(x);
      const double next = dot(x, y);
      const double ny = norm2(y);
      if (ny == 0.0 || !std::isfinite(ny)) {
        stagnated = true;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
      if (it > 0 && std::abs(next - rayleigh) <= opts.tol * std::abs(next)) return next;
      rayleigh = next;
    }
    if (!stagnated) {
      throw Error(ErrorCode::NoConvergence,
                  "power iteration did not settle within " + std::to_string(opts.max_iter) +
                      " iterations",
                  opts.max_iter);
    }
  }
  throw Error(ErrorCode::NoConvergence, "power iteration stagnated at zero after restart",
              opts.max_iter);
}

}  // namespace

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {
  if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "SymMatrix dimension must be >= 1");
}

SymMatrix SymMatrix::from_row_major(std::size_t dim, std::span<const double> values) {
  SymMatrix a(dim);
  require_size(values.size(), dim * dim, "SymMatrix entries");
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      const double upper = values[i * dim + j];
      const double lower = values[j * dim + i];
      if (upper != lower) {
        throw Error(ErrorCode::InvalidSpec, "matrix is not symmetric at (" + std::to_string(i) +
                                                ", " + std::to_string(j) + ")");
      }
      a.set(i, j, upper);
    }
  }
  return a;
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix a(dim);
  for (std::size_t i = 0; i < dim; ++i) a.set(i, i, 1.0);
  return a;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix a(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) a.set(i, i, diag[i]);
  return a;
}

void SymMatrix::set(std::size_t i, std::size_t j, double value) noexcept {
  data_[i * dim_ + j] = value;
  data_[j * dim_ + i] = value;
}

void SymMatrix::add(std::size_t i, std::size_t j, double value) noexcept {
  data_[i * dim_ + j] += value;
  if (i != j) data_[j * dim_ + i] += value;
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::DimensionMismatch, "DenseMatrix needs rows >= 1 and cols >= 1");
  }
}

DenseMatrix DenseMatrix::from_row_major(std::size_t rows, std::size_t cols,
                                        std::span<const double> values) {
  DenseMatrix m(rows, cols);
  require_size(values.size(), rows * cols, "DenseMatrix entries");
  std::copy(values.begin(), values.end(), m.data_.begin());
  return m;
}

CholeskyFactor cholesky_factorize(const SymMatrix& a) {
  const std::size_t n = a.dim();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  const double pivot_floor = 1e-14 * max_diag;

  std::vector<double> l(n * n, 0.0);
  // Row-oriented (Cholesky-Crout): row i of L depends only on rows < i, and
  // every inner product runs over contiguous memory.
  for (std::size_t i = 0; i < n; ++i) {
    double* li = l.data() + i * n;
    for (std::size_t j = 0; j <= i; ++j) {
      const double* lj = l.data() + j * n;
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
      if (j == i) {
        if (!(s > pivot_floor)) {
          throw Error(ErrorCode::NotPositiveDefinite,
                      "pivot " + std::to_string(i) + " is " + std::to_string(s) +
                          " (floor " + std::to_string(pivot_floor) + ")",
                      i);
        }
        li[i] = std::sqrt(s);
      } else {
        li[j] = s / lj[j];
      }
    }
  }
  return CholeskyFactor(n, std::move(l));
}

Vector cholesky_solve(const CholeskyFactor& factor, std::span<const double> b) {
  const std::size_t n = factor.dim();
  require_size(b.size(), n, "cholesky_solve right-hand side");

  Vector x(b.begin(), b.end());
  // L y = b
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= factor(i, k) * x[k];
    x[i] = s / factor(i, i);
  }
  // L^T x = y, column sweep so row i of L is read contiguously.
  for (std::size_t i = n; i-- > 0;) {
    x[i] /= factor(i, i);
    const double xi = x[i];
    for (std::size_t k = 0; k < i; ++k) x[k] -= factor(i, k) * xi;
  }
  return x;
}

Vector matvec(const DenseMatrix& m, std::span<const double> x) {
  require_size(x.size(), m.cols(), "matvec operand");
  Vector y(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) y[i] = dot(m.row(i), x);
  return y;
}

Vector matvec(const SymMatrix& m, std::span<const double> x) {
  require_size(x.size(), m.dim(), "matvec operand");
  Vector y(m.dim(), 0.0);
  for (std::size_t i = 0; i < m.dim(); ++i) y[i] = dot(m.row(i), x);
  return y;
}

Vector matvec_transpose(const DenseMatrix& m, std::span<const double> y) {
  require_size(y.size(), m.rows(), "matvec_transpose operand");
  Vector x(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (y[i] == 0.0) continue;
    const auto row = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) x[j] += row[j] * y[i];
  }
  return x;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_size(b.size(), a.size(), "dot operand");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double min_eigenvalue(const SymMatrix& a, EigenOptions opts) {
  return min_eigenvalue(cholesky_factorize(a), opts);
}

double min_eigenvalue(const CholeskyFactor& factor, EigenOptions opts) {
  // Power iteration on A^{-1}; its dominant eigenvalue is 1 / lambda_min(A).
  const double mu = power_iterate(
      factor.dim(), [&](const Vector& x) { return cholesky_solve(factor, x); }, opts);
  return 1.0 / mu;
}

double max_singular_value(const DenseMatrix& n, EigenOptions opts) {
  if (norm_inf(n.data()) == 0.0) {
    throw Error(ErrorCode::ZeroMatrix, "max_singular_value of an all-zero matrix");
  }
  // Gram matrix N N^T is m x m; m is the number of contact constraints.
  const std::size_t m = n.rows();
  SymMatrix gram(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) gram.set(i, j, dot(n.row(i), n.row(j)));
  }
  const double lambda = power_iterate(
      m, [&](const Vector& x) { return matvec(gram, x); }, opts);
  return std::sqrt(lambda);
}

}  // namespace uzawa
