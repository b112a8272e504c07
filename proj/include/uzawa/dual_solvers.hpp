#pragma once

// Dual ascent methods for ContactQP. Each method runs a (projected,
// possibly extrapolated) gradient iteration on the concave dual function
// psi(r) over r <= 0. The gradient of psi at r is the gap g(u_r) of the
// Lagrangian minimizer u_r = K^{-1}(p + N^T r), so every iteration costs one
// pair of triangular solves against a factorization of K computed once.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "uzawa/contact_qp.hpp"
#include "uzawa/diagnostics.hpp"
#include "uzawa/linalg.hpp"

namespace uzawa {

enum class Method { Uzawa, Accelerated, AcceleratedRestart };

std::string_view method_name(Method method);
/// Accepts "uzawa", "accel", "accel-restart".
std::optional<Method> parse_method(std::string_view name);

struct SolverConfig {
  std::optional<double> alpha;  // nullopt = default_step_size
  double epsilon = 1e-6;
  std::size_t max_iter = 100000;
  Method method = Method::AcceleratedRestart;
  bool record_history = false;

  /// Throws InvalidConfig on epsilon <= 0, max_iter == 0 or alpha <= 0.
  void validate() const;
};

struct DualState {
  Vector r;         // current reactions, always <= 0
  Vector rho;       // extrapolated point where the gradient is taken
  double tau = 1.0;
  std::size_t k = 0;
};

enum class SolveStatus { Converged, MaxIterReached };

std::string_view status_name(SolveStatus status);

struct SolveResult {
  Vector u;  // K^{-1}(p + N^T r) for the returned r
  Vector r;
  SolveStatus status = SolveStatus::MaxIterReached;
  std::size_t iterations = 0;
  double alpha = 0.0;  // step size actually used
  std::vector<IterationRecord> history;  // record k describes the iterate r^(k+1)
};

/// alpha = lambda_min(K) / sigma_max(N)^2, the midpoint of the interval
/// (0, 2 lambda_min(K) / sigma_max(N)^2) on which the Uzawa iteration converges.
double default_step_size(const ContactQP& qp);
double default_step_size(const CholeskyFactor& factor, const ContactQP& qp);

/// True iff 0 < alpha < 2 lambda_min(K) / sigma_max(N)^2.
bool step_size_validity_check(const ContactQP& qp, double alpha);

struct DualGradient {
  Vector u;      // Lagrangian minimizer at rho
  Vector gamma;  // h - N u = grad psi(rho)
};

/// rho may have positive components (extrapolated points leave the cone).
DualGradient dual_gradient(const CholeskyFactor& factor, const ContactQP& qp,
                           std::span<const double> rho);

/// Euclidean projection onto the nonpositive orthant: min(y, 0).
Vector project_nonpositive(std::span<const double> y);

struct TauStep {
  double tau;    // (1 + sqrt(1 + 4 tau^2)) / 2
  double omega;  // (tau_old - 1) / tau_new
};

TauStep tau_update(double tau);

/// Classic Uzawa: r <- min(0, r + alpha g(u_r)), stopping on ||r_k - r_{k+1}||_2 <= eps.
/// An empty r0 means r0 = 0. Throws InvalidConfig when r0 has a positive entry.
SolveResult uzawa_solve(const ContactQP& qp, const SolverConfig& cfg,
                        std::span<const double> r0 = {});
SolveResult uzawa_solve(const CholeskyFactor& factor, const ContactQP& qp,
                        const SolverConfig& cfg, std::span<const double> r0 = {});

/// Accelerated Uzawa with the tau-recursion momentum. With `restart`, momentum
/// is dropped whenever g(u_rho)^T (r_{k+1} - r_k) < 0. Stops on
/// ||rho_k - r_{k+1}||_2 <= eps.
SolveResult accelerated_solve(const ContactQP& qp, const SolverConfig& cfg,
                              std::span<const double> r0, bool restart);
SolveResult accelerated_solve(const CholeskyFactor& factor, const ContactQP& qp,
                              const SolverConfig& cfg, std::span<const double> r0,
                              bool restart);

/// Dispatches on cfg.method.
SolveResult solve(const ContactQP& qp, const SolverConfig& cfg, std::span<const double> r0 = {});
SolveResult solve(const CholeskyFactor& factor, const ContactQP& qp, const SolverConfig& cfg,
                  std::span<const double> r0 = {});

}  // namespace uzawa
