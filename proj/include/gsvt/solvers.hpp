#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "gsvt/completion.hpp"
#include "gsvt/scalar_prox.hpp"

namespace gsvt {

enum class SolverKind { Gpg, Irnn, Convex };

std::string_view solver_name(SolverKind kind);
/// Accepts "gpg", "irnn", "convex"; throws DomainError otherwise.
SolverKind parse_solver_kind(std::string_view name);

struct SolverConfig {
  /// Penalty family and shape parameters; λ is driven by the continuation
  /// schedule below.
  Penalty penalty = Penalty::logarithm(1.0, 1.5);
  /// Proximal weight, must exceed L(h) = 1.
  double mu = 1.1;
  double lambda0 = 1.0;
  double lambda_target = 1.0;
  /// λ_{k+1} = max(decay·λ_k, lambda_target).
  double decay = 0.9;
  std::size_t max_iterations = 500;
  /// Stop once λ is at its target and ‖Xᵏ - Xᵏ⁺¹‖_F / max(1, ‖Xᵏ‖_F) falls
  /// below this.
  double step_tolerance = 1e-5;
  FixedPointConfig prox{};

  void validate() const;
};

/// Per-iteration record. Entry k describes the update Xᵏ → Xᵏ⁺¹ made with
/// λ = lambda[k]: objective_before[k] = F_λ(Xᵏ), objective[k] = F_λ(Xᵏ⁺¹),
/// step_norm[k] = ‖Xᵏ - Xᵏ⁺¹‖_F.
struct SolveTrace {
  std::vector<double> objective;
  std::vector<double> objective_before;
  std::vector<double> step_norm;
  std::vector<double> lambda;
  std::optional<std::vector<double>> rel_err;
  std::size_t iterations = 0;
  bool converged = false;
};

struct SolveResult {
  Matrix x;
  SolveTrace trace;
};

struct StepResult {
  Matrix x;
  /// Singular values of x, nonincreasing.
  Vector sigma;
};

/// One GPG update: GSVT of Xᵏ - ∇h(Xᵏ)/μ under the penalty scaled by 1/μ.
StepResult gpg_step(const CompletionProblem& problem, const Penalty& penalty,
                    double mu, const Matrix& x,
                    const FixedPointConfig& prox_config = {});

/// One IRNN update: weighted SVT of Xᵏ - ∇h(Xᵏ)/μ with weights
/// g'(σᵢ(Xᵏ))/μ. `sigma_x` are the singular values of x. An infinite
/// weight (g'(0) = ∞) sets the matching output singular value to zero.
StepResult irnn_step(const CompletionProblem& problem, const Penalty& penalty,
                     double mu, const Matrix& x, const Vector& sigma_x);

/// Generalized proximal gradient with λ continuation. `init` defaults to
/// P_Ω(M); `truth` enables the rel_err trace.
SolveResult gpg_solve(const CompletionProblem& problem, const SolverConfig& config,
                      const std::optional<Matrix>& init = std::nullopt,
                      const std::optional<Matrix>& truth = std::nullopt);

/// Iteratively reweighted nuclear norm baseline, same schedule and stopping.
SolveResult irnn_solve(const CompletionProblem& problem, const SolverConfig& config,
                       const std::optional<Matrix>& init = std::nullopt,
                       const std::optional<Matrix>& truth = std::nullopt);

/// Convex baseline: gpg_solve with the penalty replaced by λ‖·‖_* (L1 on
/// singular values), i.e. singular value thresholding iterations.
SolveResult convex_pg_solve(const CompletionProblem& problem,
                            const SolverConfig& config,
                            const std::optional<Matrix>& init = std::nullopt,
                            const std::optional<Matrix>& truth = std::nullopt);

SolveResult solve(SolverKind kind, const CompletionProblem& problem,
                  const SolverConfig& config,
                  const std::optional<Matrix>& init = std::nullopt,
                  const std::optional<Matrix>& truth = std::nullopt);

}  // namespace gsvt
