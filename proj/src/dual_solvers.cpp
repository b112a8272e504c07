#include "uzawa/dual_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uzawa/error.hpp"

namespace uzawa {

namespace {

DualState initial_state(const ContactQP& qp, std::span<const double> r0) {
  const std::size_t m = qp.ncon();
  DualState state;
  if (r0.empty()) {
    state.r.assign(m, 0.0);
  } else {
    if (r0.size() != m) {
      throw Error(ErrorCode::DimensionMismatch, "initial reaction has length " +
                                                    std::to_string(r0.size()) + ", expected " +
                                                    std::to_string(m));
    }
    for (double v : r0) {
      if (!(v <= 0.0)) throw Error(ErrorCode::InvalidConfig, "initial reaction must be <= 0");
    }
    state.r.assign(r0.begin(), r0.end());
  }
  state.rho = state.r;
  return state;
}

double resolve_alpha(const CholeskyFactor& factor, const ContactQP& qp,
                     const SolverConfig& cfg) {
  return cfg.alpha ? *cfg.alpha : default_step_size(factor, qp);
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

Vector gradient_step(std::span<const double> base, std::span<const double> gamma,
                     double alpha) {
  Vector out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = std::min(0.0, base[i] + alpha * gamma[i]);
  return out;
}

SolveResult finish(const CholeskyFactor& factor, const ContactQP& qp, DualState&& state,
                   SolveStatus status, double alpha, std::vector<IterationRecord>&& history) {
  SolveResult result;
  result.u = lagrangian_minimizer(factor, qp, state.r);
  result.r = std::move(state.r);
  result.status = status;
  result.iterations = state.k;
  result.alpha = alpha;
  result.history = std::move(history);
  return result;
}

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::Uzawa: return "uzawa";
    case Method::Accelerated: return "accel";
    case Method::AcceleratedRestart: return "accel-restart";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "uzawa") return Method::Uzawa;
  if (name == "accel") return Method::Accelerated;
  if (name == "accel-restart") return Method::AcceleratedRestart;
  return std::nullopt;
}

std::string_view status_name(SolveStatus status) {
  return status == SolveStatus::Converged ? "Converged" : "MaxIterReached";
}

void SolverConfig::validate() const {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidConfig, "epsilon must be positive");
  if (max_iter == 0) throw Error(ErrorCode::InvalidConfig, "max_iter must be >= 1");
  if (alpha && !(*alpha > 0.0 && std::isfinite(*alpha))) {
    throw Error(ErrorCode::InvalidConfig, "alpha must be positive");
  }
}

double default_step_size(const ContactQP& qp) {
  return default_step_size(cholesky_factorize(qp.stiffness), qp);
}

double default_step_size(const CholeskyFactor& factor, const ContactQP& qp) {
  const double lambda_min = min_eigenvalue(factor);
  const double sigma_max = max_singular_value(qp.constraint);
  return lambda_min / (sigma_max * sigma_max);
}

bool step_size_validity_check(const ContactQP& qp, double alpha) {
  if (!(alpha > 0.0)) return false;
  const double lambda_min = min_eigenvalue(qp.stiffness);
  const double sigma_max = max_singular_value(qp.constraint);
  return alpha < 2.0 * lambda_min / (sigma_max * sigma_max);
}

DualGradient dual_gradient(const CholeskyFactor& factor, const ContactQP& qp,
                           std::span<const double> rho) {
  DualGradient out;
  out.u = lagrangian_minimizer(factor, qp, rho);
  out.gamma = gap(qp, out.u);
  return out;
}

Vector project_nonpositive(std::span<const double> y) {
  Vector out(y.size());
  std::transform(y.begin(), y.end(), out.begin(), [](double v) { return std::min(v, 0.0); });
  return out;
}

TauStep tau_update(double tau) {
  const double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tau * tau));
  return {next, (tau - 1.0) / next};
}

SolveResult uzawa_solve(const ContactQP& qp, const SolverConfig& cfg,
                        std::span<const double> r0) {
  qp.validate();
  return uzawa_solve(cholesky_factorize(qp.stiffness), qp, cfg, r0);
}

SolveResult uzawa_solve(const CholeskyFactor& factor, const ContactQP& qp,
                        const SolverConfig& cfg, std::span<const double> r0) {
  cfg.validate();
  DualState state = initial_state(qp, r0);
  const double alpha = resolve_alpha(factor, qp, cfg);
  std::vector<IterationRecord> history;

  while (state.k < cfg.max_iter) {
    const DualGradient grad = dual_gradient(factor, qp, state.r);
    Vector next = gradient_step(state.r, grad.gamma, alpha);
    const double step = distance(state.r, next);
    state.r = std::move(next);
    state.rho = state.r;
    if (cfg.record_history) {
      history.push_back(record_iteration(factor, qp, state.k, state.r, step, false));
    }
    ++state.k;
    if (step <= cfg.epsilon) {
      return finish(factor, qp, std::move(state), SolveStatus::Converged, alpha,
                    std::move(history));
    }
  }
  return finish(factor, qp, std::move(state), SolveStatus::MaxIterReached, alpha,
                std::move(history));
}

SolveResult accelerated_solve(const ContactQP& qp, const SolverConfig& cfg,
                              std::span<const double> r0, bool restart) {
  qp.validate();
  return accelerated_solve(cholesky_factorize(qp.stiffness), qp, cfg, r0, restart);
}

SolveResult accelerated_solve(const CholeskyFactor& factor, const ContactQP& qp,
                              const SolverConfig& cfg, std::span<const double> r0,
                              bool restart) {
  cfg.validate();
  DualState state = initial_state(qp, r0);
  const double alpha = resolve_alpha(factor, qp, cfg);
  const std::size_t m = qp.ncon();
  std::vector<IterationRecord> history;
  Vector diff(m);

  while (state.k < cfg.max_iter) {
    const DualGradient grad = dual_gradient(factor, qp, state.rho);
    Vector next = gradient_step(state.rho, grad.gamma, alpha);
    const double step = distance(state.rho, next);
    const TauStep tau = tau_update(state.tau);

    for (std::size_t i = 0; i < m; ++i) diff[i] = next[i] - state.r[i];
    // Obtuse angle between momentum and gradient: drop the momentum. A zero
    // inner product keeps it.
    const bool restarted = restart && dot(grad.gamma, diff) < 0.0;
    if (restarted) {
      state.rho = next;
      state.tau = 1.0;
    } else {
      for (std::size_t i = 0; i < m; ++i) state.rho[i] = next[i] + tau.omega * diff[i];
      state.tau = tau.tau;
    }
    state.r = std::move(next);

    if (cfg.record_history) {
      history.push_back(record_iteration(factor, qp, state.k, state.r, step, restarted));
    }
    ++state.k;
    if (step <= cfg.epsilon) {
      return finish(factor, qp, std::move(state), SolveStatus::Converged, alpha,
                    std::move(history));
    }
  }
  return finish(factor, qp, std::move(state), SolveStatus::MaxIterReached, alpha,
                std::move(history));
}

SolveResult solve(const ContactQP& qp, const SolverConfig& cfg, std::span<const double> r0) {
  qp.validate();
  return solve(cholesky_factorize(qp.stiffness), qp, cfg, r0);
}

SolveResult solve(const CholeskyFactor& factor, const ContactQP& qp, const SolverConfig& cfg,
                  std::span<const double> r0) {
  switch (cfg.method) {
    case Method::Uzawa: return uzawa_solve(factor, qp, cfg, r0);
    case Method::Accelerated: return accelerated_solve(factor, qp, cfg, r0, false);
    case Method::AcceleratedRestart: return accelerated_solve(factor, qp, cfg, r0, true);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method");
}

}  // namespace uzawa
