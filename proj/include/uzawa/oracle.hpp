#pragma once

// Independent reference solvers used to check the main code paths. Nothing
// here touches the Cholesky kernel: the KKT systems are solved by Gaussian
// elimination with partial pivoting and eigenvalues come from Jacobi sweeps.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "uzawa/contact_qp.hpp"
#include "uzawa/linalg.hpp"

namespace uzawa::oracle {

struct OracleSolution {
  Vector u;
  Vector r;
  std::vector<std::size_t> active_set;  // 0-based constraint indices
  double optimal_value = 0.0;
  std::size_t accepted_subsets = 0;  // how many subsets passed the KKT test
};

inline constexpr std::size_t kMaxOracleConstraints = 12;

/// Enumerates all 2^m active sets, solving the equality-constrained KKT
/// system for each and accepting the one with r_A <= 1e-10 and
/// g(u) >= -1e-10. Singular subsets are skipped.
/// Throws TooManyConstraints when m > 12 and NoFeasibleSubset when nothing
/// is accepted.
OracleSolution active_set_solve(const ContactQP& qp);

/// All eigenvalues in ascending order via cyclic Jacobi rotations.
Vector jacobi_eigenvalues(const SymMatrix& a);

/// Dense solve by Gaussian elimination with partial pivoting; returns false
/// when a pivot is below `singular_tol` times the largest entry of `a`.
bool gaussian_solve(std::vector<double> a, std::size_t n, Vector& b,
                    double singular_tol = 1e-12);

/// Uniform double in [lo, hi) from the raw 64-bit output, so sequences do not
/// depend on the standard library's distribution implementation.
double uniform(std::mt19937_64& rng, double lo, double hi);

/// Strictly convex instance with a strictly feasible point:
/// K = G^T G + I, N and p uniform in [-1, 1] and [-3, 3], and
/// h = N u0 + s with u0 uniform in [-1, 1] and s uniform in [0.05, 1).
ContactQP random_instance(std::mt19937_64& rng, std::size_t d, std::size_t m);

}  // namespace uzawa::oracle
