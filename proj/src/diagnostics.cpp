#include "uzawa/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uzawa/error.hpp"

namespace uzawa {

namespace {

void require(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has length " +
                                                  std::to_string(got) + ", expected " +
                                                  std::to_string(want));
  }
}

double sum_squares(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

double primal_objective(const ContactQP& qp, std::span<const double> u) {
  require(u.size(), qp.dim(), "displacement");
  const Vector ku = matvec(qp.stiffness, u);
  return 0.5 * dot(u, ku) - dot(qp.load, u);
}

Vector lagrangian_minimizer(const CholeskyFactor& factor, const ContactQP& qp,
                            std::span<const double> r) {
  require(r.size(), qp.ncon(), "reaction");
  Vector rhs = matvec_transpose(qp.constraint, r);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += qp.load[i];
  return cholesky_solve(factor, rhs);
}

double dual_objective(const CholeskyFactor& factor, const ContactQP& qp,
                      std::span<const double> r) {
  const Vector u = lagrangian_minimizer(factor, qp, r);
  return primal_objective(qp, u) + dot(r, gap(qp, u));
}

KktResidual kkt_residual(const ContactQP& qp, std::span<const double> u,
                         std::span<const double> r) {
  require(u.size(), qp.dim(), "displacement");
  require(r.size(), qp.ncon(), "reaction");

  KktResidual res;
  res.e1 = matvec(qp.stiffness, u);
  const Vector ntr = matvec_transpose(qp.constraint, r);
  for (std::size_t i = 0; i < res.e1.size(); ++i) res.e1[i] -= qp.load[i] + ntr[i];

  const Vector g = gap(qp, u);
  const std::size_t m = qp.ncon();
  res.e2.resize(m);
  res.e3.resize(m);
  res.e4.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    res.e2[i] = std::min(g[i], 0.0);
    res.e3[i] = std::max(r[i], 0.0);
    res.e4[i] = -g[i] * r[i];
  }
  res.total = std::sqrt(sum_squares(res.e1) + sum_squares(res.e2) + sum_squares(res.e3) +
                        sum_squares(res.e4));
  return res;
}

IterationRecord record_iteration(const CholeskyFactor& factor, const ContactQP& qp,
                                 std::size_t k, std::span<const double> r, double step_norm,
                                 bool restarted) {
  const Vector u = lagrangian_minimizer(factor, qp, r);
  IterationRecord rec;
  rec.k = k;
  rec.primal_obj = primal_objective(qp, u);
  rec.dual_obj = rec.primal_obj + dot(r, gap(qp, u));
  rec.residual_total = kkt_residual(qp, u, r).total;
  rec.step_norm = step_norm;
  rec.restarted = restarted;
  return rec;
}

}  // namespace uzawa
