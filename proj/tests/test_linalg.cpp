#include <doctest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "uzawa/error.hpp"
#include "uzawa/linalg.hpp"
#include "uzawa/oracle.hpp"

using namespace uzawa;
using uzawa::testing::random_spd;
using uzawa::testing::rand_unit;

namespace {

SymMatrix sym2(double a, double b, double c) {
  return SymMatrix::from_row_major(2, std::vector<double>{a, b, b, c});
}

double frobenius_rel_error(const SymMatrix& a, const CholeskyFactor& f) {
  const std::size_t n = a.dim();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k <= std::min(i, j); ++k) s += f(i, k) * f(j, k);
      num += (s - a(i, j)) * (s - a(i, j));
      den += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(num / den);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an uzawa::Error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("cholesky_factorize small cases") {
  SUBCASE("1x1") {
    const auto f = cholesky_factorize(SymMatrix::from_row_major(1, std::vector<double>{4.0}));
    CHECK(f(0, 0) == 2.0);
  }
  SUBCASE("identity") {
    const auto f = cholesky_factorize(SymMatrix::identity(3));
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) CHECK(f(i, j) == (i == j ? 1.0 : 0.0));
    }
  }
  SUBCASE("2x2") {
    // [[2,0],[1,2]] * [[2,1],[0,2]] = [[4,2],[2,5]]
    const auto f = cholesky_factorize(sym2(4, 2, 5));
    CHECK(f(0, 0) == doctest::Approx(2.0));
    CHECK(f(1, 0) == doctest::Approx(1.0));
    CHECK(f(1, 1) == doctest::Approx(2.0));
    CHECK(f(0, 1) == 0.0);
  }
}

TEST_CASE("cholesky_factorize rejects indefinite and singular matrices") {
  try {
    cholesky_factorize(sym2(1, 2, 1));
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
    REQUIRE(e.index().has_value());
    CHECK(*e.index() == 1);
  }
  // Singular: rigid mode of an unsupported spring pair.
  CHECK(code_of([] { cholesky_factorize(sym2(1, -1, 1)); }) == ErrorCode::NotPositiveDefinite);
}

TEST_CASE("cholesky_solve") {
  SUBCASE("identity") {
    const auto x = cholesky_solve(cholesky_factorize(SymMatrix::identity(3)),
                                  std::vector<double>{1, 2, 3});
    CHECK(x == Vector{1, 2, 3});
  }
  SUBCASE("1x1") {
    const auto x = cholesky_solve(
        cholesky_factorize(SymMatrix::from_row_major(1, std::vector<double>{4.0})),
        std::vector<double>{8.0});
    CHECK(x[0] == doctest::Approx(2.0));
  }
  SUBCASE("2x2 against elimination") {
    // 4x + 2y = 10, 2x + 5y = 11  =>  y = 1.5, x = 1.75
    const auto x = cholesky_solve(cholesky_factorize(sym2(4, 2, 5)), std::vector<double>{10, 11});
    CHECK(x[0] == doctest::Approx(1.75).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(1.5).epsilon(1e-14));
    Vector b{10, 11};
    REQUIRE(oracle::gaussian_solve({4, 2, 2, 5}, 2, b));
    CHECK(x[0] == doctest::Approx(b[0]).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(b[1]).epsilon(1e-14));
  }
  SUBCASE("dimension mismatch") {
    CHECK(code_of([] {
            cholesky_solve(cholesky_factorize(SymMatrix::identity(2)), std::vector<double>{1.0});
          }) == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("matvec and matvec_transpose") {
  const auto eye = DenseMatrix::from_row_major(2, 2, std::vector<double>{1, 0, 0, 1});
  CHECK(matvec(eye, std::vector<double>{3, 4}) == Vector{3, 4});
  const auto row = DenseMatrix::from_row_major(1, 2, std::vector<double>{1, 2});
  CHECK(matvec(row, std::vector<double>{1, 1}) == Vector{3});
  CHECK(matvec_transpose(row, std::vector<double>{2}) == Vector{2, 4});
  CHECK(code_of([&] { matvec(row, std::vector<double>{1}); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([&] { matvec_transpose(row, std::vector<double>{1, 1}); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("matrix construction") {
  CHECK(code_of([] { SymMatrix::from_row_major(2, std::vector<double>{1, 2, 3, 4}); }) ==
        ErrorCode::InvalidSpec);
  CHECK(code_of([] { SymMatrix::from_row_major(2, std::vector<double>{1, 2, 3}); }) ==
        ErrorCode::DimensionMismatch);
  CHECK(code_of([] { SymMatrix(0); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([] { DenseMatrix(0, 3); }) == ErrorCode::DimensionMismatch);

  SymMatrix a(3);
  a.add(0, 2, 1.5);
  a.add(2, 0, 0.5);
  CHECK(a(0, 2) == 2.0);
  CHECK(a(2, 0) == 2.0);
}

TEST_CASE("min_eigenvalue") {
  CHECK(min_eigenvalue(SymMatrix::diagonal(std::vector<double>{2, 5})) ==
        doctest::Approx(2.0).epsilon(1e-8));
  CHECK(min_eigenvalue(SymMatrix::identity(4)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(min_eigenvalue(sym2(4, 2, 5)) ==
        doctest::Approx((9.0 - std::sqrt(17.0)) / 2.0).epsilon(1e-8));
  CHECK(code_of([] { min_eigenvalue(sym2(1, 2, 1)); }) == ErrorCode::NotPositiveDefinite);
  // Two eigenvalues close together and a single allowed step.
  CHECK(code_of([] {
          min_eigenvalue(SymMatrix::diagonal(std::vector<double>{1.0, 1.01, 3.0}), {1e-12, 2});
        }) == ErrorCode::NoConvergence);
}

TEST_CASE("max_singular_value") {
  CHECK(max_singular_value(DenseMatrix::from_row_major(1, 2, std::vector<double>{3, 0})) ==
        doctest::Approx(3.0));
  CHECK(max_singular_value(DenseMatrix::from_row_major(2, 2, std::vector<double>{1, 0, 0, 1})) ==
        doctest::Approx(1.0));
  CHECK(max_singular_value(DenseMatrix::from_row_major(2, 2, std::vector<double>{1, 1, 0, 1})) ==
        doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-8));
  CHECK(code_of([] { max_singular_value(DenseMatrix(2, 3)); }) == ErrorCode::ZeroMatrix);
}

TEST_CASE("max_singular_value recovers from an annihilated start vector") {
  // N N^T = [[1,-1],[-1,1]] maps the all-ones start vector to zero.
  const auto n = DenseMatrix::from_row_major(2, 2, std::vector<double>{1, 0, -1, 0});
  CHECK(max_singular_value(n) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("property: random SPD factorization and solves") {
  std::mt19937_64 rng(1234);
  for (std::size_t trial = 0; trial < 40; ++trial) {
    const std::size_t d = 1 + rng() % 50;
    const SymMatrix a = random_spd(rng, d);
    const CholeskyFactor f = cholesky_factorize(a);
    CHECK(frobenius_rel_error(a, f) <= 1e-12);

    Vector b(d);
    for (double& v : b) v = rand_unit(rng);
    const Vector ax = matvec(a, cholesky_solve(f, b));
    CHECK(uzawa::testing::max_abs_diff(ax, b) <= 1e-9 * (1.0 + norm_inf(b)));
  }
}

TEST_CASE("property: extremal estimates bound Rayleigh quotients") {
  std::mt19937_64 rng(99);
  for (std::size_t trial = 0; trial < 10; ++trial) {
    const std::size_t d = 2 + rng() % 12;
    const std::size_t m = 1 + rng() % d;
    const SymMatrix a = random_spd(rng, d);
    DenseMatrix n(m, d);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < d; ++j) n(i, j) = rand_unit(rng);
    }
    const double lmin = min_eigenvalue(a);
    const double smax = max_singular_value(n);
    for (int s = 0; s < 100; ++s) {
      Vector x(d);
      for (double& v : x) v = rand_unit(rng);
      const double rq = dot(x, matvec(a, x)) / dot(x, x);
      CHECK(lmin <= rq * (1.0 + 1e-10));
      CHECK(smax >= norm2(matvec(n, x)) / norm2(x) * (1.0 - 1e-10));
    }
  }
}

TEST_CASE("property: estimators agree with Jacobi on small matrices") {
  std::mt19937_64 rng(7);
  for (std::size_t trial = 0; trial < 30; ++trial) {
    const std::size_t d = 1 + rng() % 8;
    const SymMatrix a = random_spd(rng, d);
    const Vector eig = oracle::jacobi_eigenvalues(a);
    CHECK(min_eigenvalue(a) == doctest::Approx(eig.front()).epsilon(1e-6));

    const std::size_t m = 1 + rng() % 8;
    DenseMatrix n(m, d);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < d; ++j) n(i, j) = rand_unit(rng);
    }
    SymMatrix gram(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) gram.set(i, j, dot(n.row(i), n.row(j)));
    }
    const double sigma = std::sqrt(oracle::jacobi_eigenvalues(gram).back());
    CHECK(max_singular_value(n) == doctest::Approx(sigma).epsilon(1e-6));
  }
}
