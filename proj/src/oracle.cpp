#include "uzawa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "uzawa/error.hpp"

namespace uzawa::oracle {

namespace {

constexpr double kAcceptTol = 1e-10;

}  // namespace

bool gaussian_solve(std::vector<double> a, std::size_t n, Vector& b, double singular_tol) {
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  const double floor = singular_tol * scale;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::abs(a[row * n + col]) > std::abs(a[piv * n + col])) piv = row;
    }
    if (std::abs(a[piv * n + col]) <= floor) return false;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[piv * n + j], a[col * n + j]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t row = col + 1; row < n; ++row) {
      const double f = a[row * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a[row * n + j] -= f * a[col * n + j];
      b[row] -= f * b[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * b[j];
    b[i] = s / a[i * n + i];
  }
  return true;
}

OracleSolution active_set_solve(const ContactQP& qp) {
  qp.validate();
  const std::size_t d = qp.dim();
  const std::size_t m = qp.ncon();
  if (m > kMaxOracleConstraints) {
    throw Error(ErrorCode::TooManyConstraints,
                "active-set enumeration supports m <= 12, got m = " + std::to_string(m));
  }

  OracleSolution best;
  bool found = false;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) active.push_back(i);
    }
    // [[K, N_A^T], [N_A, 0]] (u, -r_A) = (p, h_A)
    const std::size_t n = d + active.size();
    std::vector<double> kkt(n * n, 0.0);
    Vector rhs(n, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) kkt[i * n + j] = qp.stiffness(i, j);
      rhs[i] = qp.load[i];
    }
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t j = 0; j < d; ++j) {
        const double v = qp.constraint(active[a], j);
        kkt[(d + a) * n + j] = v;
        kkt[j * n + d + a] = v;
      }
      rhs[d + a] = qp.gap_offset[active[a]];
    }
    if (!gaussian_solve(std::move(kkt), n, rhs)) continue;

    Vector u(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(d));
    Vector r(m, 0.0);
    bool ok = true;
    for (std::size_t a = 0; a < active.size(); ++a) {
      r[active[a]] = -rhs[d + a];
      if (r[active[a]] > kAcceptTol) ok = false;
    }
    const Vector g = gap(qp, u);
    for (double gi : g) {
      if (gi < -kAcceptTol) ok = false;
    }
    if (!ok) continue;

    ++best.accepted_subsets;
    if (!found) {
      found = true;
      best.u = std::move(u);
      best.r = std::move(r);
      best.active_set = std::move(active);
    }
  }
  if (!found) throw Error(ErrorCode::NoFeasibleSubset, "no active set satisfies the KKT test");

  const Vector ku = matvec(qp.stiffness, best.u);
  best.optimal_value = 0.5 * dot(best.u, ku) - dot(qp.load, best.u);
  return best;
}

Vector jacobi_eigenvalues(const SymMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<double> m(a.data());
  auto at = [&](std::size_t i, std::size_t j) -> double& { return m[i * n + j]; };

  double frob = 0.0;
  for (double v : m) frob += v * v;
  frob = std::sqrt(frob);
  const double target = 1e-12 * frob;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) off += at(i, j) * at(i, j);
      }
    }
    if (std::sqrt(off) <= target) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  Vector eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

ContactQP random_instance(std::mt19937_64& rng, std::size_t d, std::size_t m) {
  std::vector<double> g(d * d);
  for (double& v : g) v = uniform(rng, -1.0, 1.0);
  SymMatrix k(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      double s = i == j ? 1.0 : 0.0;
      for (std::size_t l = 0; l < d; ++l) s += g[l * d + i] * g[l * d + j];
      k.set(i, j, s);
    }
  }

  ContactQP qp{std::move(k), Vector(d), DenseMatrix(m, d), Vector(m)};
  for (double& v : qp.load) v = uniform(rng, -3.0, 3.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) qp.constraint(i, j) = uniform(rng, -1.0, 1.0);
  }
  Vector u0(d);
  for (double& v : u0) v = uniform(rng, -1.0, 1.0);
  const Vector nu0 = matvec(qp.constraint, u0);
  for (std::size_t i = 0; i < m; ++i) qp.gap_offset[i] = nu0[i] + uniform(rng, 0.05, 1.0);
  return qp;
}

}  // namespace uzawa::oracle
