#pragma once

#include <cstddef>

#include "uzawa/linalg.hpp"

namespace uzawa {

/// Small-deformation frictionless contact problem as a convex QP:
///
///   minimize    1/2 u^T K u - p^T u
///   subject to  g(u) = h - N u >= 0
///
/// with d displacement unknowns and m contact candidates. Lagrange
/// multipliers r <= 0 of the gap constraints are the contact reactions.
struct ContactQP {
  SymMatrix stiffness;          // K, d x d
  Vector load;                  // p, d
  DenseMatrix constraint;       // N, m x d
  Vector gap_offset;            // h, m

  std::size_t dim() const noexcept { return stiffness.dim(); }
  std::size_t ncon() const noexcept { return constraint.rows(); }

  /// Throws DimensionMismatch when the blocks disagree on d or m.
  void validate() const;
};

/// g(u) = h - N u.
Vector gap(const ContactQP& qp, std::span<const double> u);

}  // namespace uzawa
