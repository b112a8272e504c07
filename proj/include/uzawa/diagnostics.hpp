#pragma once

#include <cstddef>

#include "uzawa/contact_qp.hpp"
#include "uzawa/linalg.hpp"

namespace uzawa {

/// KKT residual blocks of a primal-dual pair (u, r):
///   e1 = K u - p - N^T r         force balance
///   e2 = min(g(u), 0)            penetration
///   e3 = max(r, 0)               adhesion
///   e4 = -diag(g(u)) r           complementarity
struct KktResidual {
  Vector e1;
  Vector e2;
  Vector e3;
  Vector e4;
  double total = 0.0;  // Euclidean norm of (e1, e2, e3, e4)
};

struct IterationRecord {
  std::size_t k = 0;
  double dual_obj = 0.0;
  double primal_obj = 0.0;
  double residual_total = 0.0;
  double step_norm = 0.0;
  bool restarted = false;
};

/// pi(u) = 1/2 u^T K u - p^T u.
double primal_objective(const ContactQP& qp, std::span<const double> u);

/// Minimizer of the Lagrangian for fixed multipliers: K u = p + N^T r.
Vector lagrangian_minimizer(const CholeskyFactor& factor, const ContactQP& qp,
                            std::span<const double> r);

/// Dual function psi(r) = pi(u_r) + r^T (h - N u_r), evaluated from scratch.
double dual_objective(const CholeskyFactor& factor, const ContactQP& qp,
                      std::span<const double> r);

KktResidual kkt_residual(const ContactQP& qp, std::span<const double> u,
                         std::span<const double> r);

/// Evaluates psi at the multipliers r and reports the pair (u_r, r).
IterationRecord record_iteration(const CholeskyFactor& factor, const ContactQP& qp,
                                 std::size_t k, std::span<const double> r, double step_norm,
                                 bool restarted);

}  // namespace uzawa
