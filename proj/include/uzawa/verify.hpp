#pragma once

// Randomized self-check: every solver against the active-set oracle, and the
// dual gradient against central finite differences of the dual function.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uzawa/contact_qp.hpp"
#include "uzawa/dual_solvers.hpp"

namespace uzawa::verify {

using SolverFn = std::function<SolveResult(const ContactQP&, const SolverConfig&)>;

struct NamedSolver {
  std::string name;
  SolverFn run;
};

/// uzawa, accel and accel-restart from dual_solvers.
std::vector<NamedSolver> default_solvers();

struct VerifyOptions {
  std::uint64_t seed = 20170101;
  std::size_t cases = 200;
  std::size_t max_dim = 6;       // d drawn from [1, max_dim], m from [1, d]
  double solve_epsilon = 1e-10;
  double solution_tol = 1e-6;    // max-norm on u and r
  double fd_step = 1e-6;
  double fd_tol = 1e-5;          // relative, floored at 1
};

struct Failure {
  std::string suite;
  std::size_t case_index = 0;
  std::string reason;
  ContactQP instance;
};

struct SuiteReport {
  std::string name;
  std::size_t passed = 0;
  std::size_t total = 0;
};

struct VerifyReport {
  std::vector<SuiteReport> suites;
  std::optional<Failure> first_failure;

  bool ok() const { return !first_failure.has_value(); }
};

/// Case i of a run is a pure function of (seed, i).
ContactQP random_case(std::uint64_t seed, std::size_t case_index, std::size_t max_dim);

VerifyReport run_verify(const VerifyOptions& opts,
                        const std::vector<NamedSolver>& solvers = default_solvers());

}  // namespace uzawa::verify
