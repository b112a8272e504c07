#include "uzawa/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "uzawa/diagnostics.hpp"
#include "uzawa/error.hpp"
#include "uzawa/oracle.hpp"

namespace uzawa::verify {

namespace {

double max_abs_diff(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::optional<std::string> check_against_oracle(const ContactQP& qp,
                                                const oracle::OracleSolution& ref,
                                                const NamedSolver& solver,
                                                const VerifyOptions& opts) {
  SolverConfig cfg;
  cfg.epsilon = opts.solve_epsilon;
  SolveResult res;
  try {
    res = solver.run(qp, cfg);
  } catch (const Error& e) {
    return solver.name + " raised " + e.what();
  }
  std::ostringstream why;
  if (res.u.size() != qp.dim() || res.r.size() != qp.ncon()) {
    why << solver.name << " returned vectors of the wrong length";
    return why.str();
  }
  for (std::size_t i = 0; i < res.r.size(); ++i) {
    if (res.r[i] > 0.0) {
      why << solver.name << " reaction r[" << i << "] = " << res.r[i] << " is positive";
      return why.str();
    }
  }
  if (res.status != SolveStatus::Converged) {
    why << solver.name << " did not converge in " << res.iterations << " iterations";
    return why.str();
  }
  const double du = max_abs_diff(res.u, ref.u);
  const double dr = max_abs_diff(res.r, ref.r);
  if (!(du <= opts.solution_tol) || !(dr <= opts.solution_tol)) {
    why << solver.name << " differs from oracle: |du|_inf = " << du << ", |dr|_inf = " << dr;
    return why.str();
  }
  return std::nullopt;
}

std::optional<std::string> check_gradient(const ContactQP& qp, std::mt19937_64& rng,
                                          const VerifyOptions& opts) {
  const CholeskyFactor factor = cholesky_factorize(qp.stiffness);
  Vector r(qp.ncon());
  for (double& v : r) v = oracle::uniform(rng, -2.0, 0.0);
  const DualGradient grad = dual_gradient(factor, qp, r);
  for (std::size_t i = 0; i < r.size(); ++i) {
    Vector plus = r;
    Vector minus = r;
    plus[i] += opts.fd_step;
    minus[i] -= opts.fd_step;
    const double fd = (dual_objective(factor, qp, plus) - dual_objective(factor, qp, minus)) /
                      (2.0 * opts.fd_step);
    const double err = std::abs(fd - grad.gamma[i]) / std::max(1.0, std::abs(grad.gamma[i]));
    if (!(err <= opts.fd_tol)) {
      std::ostringstream why;
      why << "gradient component " << i << ": finite difference " << fd << " vs " << grad.gamma[i];
      return why.str();
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<NamedSolver> default_solvers() {
  return {
      {"uzawa", [](const ContactQP& qp, const SolverConfig& cfg) { return uzawa_solve(qp, cfg); }},
      {"accel",
       [](const ContactQP& qp, const SolverConfig& cfg) {
         return accelerated_solve(qp, cfg, {}, false);
       }},
      {"accel-restart",
       [](const ContactQP& qp, const SolverConfig& cfg) {
         return accelerated_solve(qp, cfg, {}, true);
       }},
  };
}

ContactQP random_case(std::uint64_t seed, std::size_t case_index, std::size_t max_dim) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(case_index)};
  std::mt19937_64 rng(seq);
  const auto d = 1 + static_cast<std::size_t>(rng() % max_dim);
  const auto m = 1 + static_cast<std::size_t>(rng() % d);
  return oracle::random_instance(rng, d, m);
}

VerifyReport run_verify(const VerifyOptions& opts, const std::vector<NamedSolver>& solvers) {
  VerifyReport report;
  SuiteReport equivalence{"oracle-equivalence", 0, 0};
  SuiteReport gradient{"gradient-check", 0, 0};

  auto fail = [&](const char* suite, std::size_t i, std::string reason, const ContactQP& qp) {
    if (!report.first_failure) report.first_failure = Failure{suite, i, std::move(reason), qp};
  };

  for (std::size_t i = 0; i < opts.cases; ++i) {
    const ContactQP qp = random_case(opts.seed, i, opts.max_dim);

    ++equivalence.total;
    std::optional<std::string> problem;
    try {
      const oracle::OracleSolution ref = oracle::active_set_solve(qp);
      for (const NamedSolver& solver : solvers) {
        problem = check_against_oracle(qp, ref, solver, opts);
        if (problem) break;
      }
    } catch (const Error& e) {
      problem = std::string("oracle raised ") + e.what();
    }
    if (problem) {
      fail("oracle-equivalence", i, *problem, qp);
    } else {
      ++equivalence.passed;
    }

    ++gradient.total;
    std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(i),
                      0x9e37u};
    std::mt19937_64 rng(seq);
    if (auto why = check_gradient(qp, rng, opts)) {
      fail("gradient-check", i, *why, qp);
    } else {
      ++gradient.passed;
    }
  }
  report.suites = {equivalence, gradient};
  return report;
}

}  // namespace uzawa::verify
