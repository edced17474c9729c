#include "gsvt/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "gsvt/errors.hpp"

namespace gsvt {

std::string_view solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::Gpg: return "gpg";
    case SolverKind::Irnn: return "irnn";
    case SolverKind::Convex: return "convex";
  }
  return "unknown";
}

SolverKind parse_solver_kind(std::string_view name) {
  if (name == "gpg") return SolverKind::Gpg;
  if (name == "irnn") return SolverKind::Irnn;
  if (name == "convex") return SolverKind::Convex;
  throw DomainError("unknown solver '" + std::string(name) +
                    "' (expected gpg, irnn or convex)");
}

void SolverConfig::validate() const {
  if (!(mu > 1.0) || !std::isfinite(mu)) {
    throw DomainError("solver config: mu must exceed L(h) = 1");
  }
  if (!(lambda0 > 0.0) || !std::isfinite(lambda0) || !(lambda_target > 0.0)) {
    throw DomainError("solver config: lambda0 and lambda_target must be positive");
  }
  if (lambda_target > lambda0) {
    throw DomainError("solver config: lambda_target must not exceed lambda0");
  }
  if (!(decay > 0.0 && decay < 1.0)) {
    throw DomainError("solver config: decay must lie in (0, 1)");
  }
  if (max_iterations == 0 || !(step_tolerance > 0.0)) {
    throw DomainError("solver config: max_iterations and step_tolerance must be positive");
  }
  prox.validate();
}

namespace {

// Xᵏ - ∇h(Xᵏ)/μ, touching only observed entries.
Matrix gradient_point(const CompletionProblem& problem, double mu, const Matrix& x) {
  if (x.rows() != problem.rows() || x.cols() != problem.cols()) {
    throw DomainError("solver: iterate shape does not match problem");
  }
  Matrix b = x;
  const double inv_mu = 1.0 / mu;
  for (const auto& e : problem.entries()) {
    b(e.row, e.col) -= inv_mu * (x(e.row, e.col) - e.value);
  }
  return b;
}

double rel_err_of(const Matrix& x, const Matrix& truth) {
  return (x - truth).norm() / truth.norm();
}

using StepFn = std::function<StepResult(const Penalty&, const Matrix&, const Vector&)>;

SolveResult run(const CompletionProblem& problem, const SolverConfig& config,
                const std::optional<Matrix>& init,
                const std::optional<Matrix>& truth, const StepFn& step) {
  config.validate();
  Matrix x = init ? *init : problem.observed_matrix();
  if (x.rows() != problem.rows() || x.cols() != problem.cols()) {
    throw DomainError("solver: init shape does not match problem");
  }
  if (truth) {
    if (truth->rows() != problem.rows() || truth->cols() != problem.cols()) {
      throw DomainError("solver: truth shape does not match problem");
    }
    if (truth->norm() == 0.0) throw DomainError("solver: truth must be nonzero");
  }
  Vector sigma = singular_values(x);

  SolveResult result;
  SolveTrace& trace = result.trace;
  if (truth) trace.rel_err.emplace();

  double lambda = config.lambda0;
  for (std::size_t k = 0; k < config.max_iterations; ++k) {
    const Penalty penalty = config.penalty.with_lambda(lambda);
    const double before = objective_f(problem, penalty, x, sigma);
    StepResult next = step(penalty, x, sigma);
    const double after = objective_f(problem, penalty, next.x, next.sigma);
    if (!std::isfinite(before) || !std::isfinite(after)) {
      throw NumericalError("solver: objective became non-finite at iteration " +
                           std::to_string(k));
    }
    const double step_norm = (x - next.x).norm();
    const double x_norm = x.norm();

    trace.objective_before.push_back(before);
    trace.objective.push_back(after);
    trace.step_norm.push_back(step_norm);
    trace.lambda.push_back(lambda);
    if (truth) trace.rel_err->push_back(rel_err_of(next.x, *truth));
    trace.iterations = k + 1;

    x = std::move(next.x);
    sigma = std::move(next.sigma);

    const bool at_target = lambda <= config.lambda_target;
    if (at_target && step_norm / std::max(1.0, x_norm) < config.step_tolerance) {
      trace.converged = true;
      break;
    }
    lambda = std::max(config.decay * lambda, config.lambda_target);
  }
  result.x = std::move(x);
  return result;
}

}  // namespace

StepResult gpg_step(const CompletionProblem& problem, const Penalty& penalty,
                    double mu, const Matrix& x, const FixedPointConfig& prox_config) {
  const Matrix b = gradient_point(problem, mu, x);
  GsvtResult r = gsvt(penalty.scaled(1.0 / mu), b, prox_config);
  return {std::move(r.x), std::move(r.shrunk_sigma)};
}

StepResult irnn_step(const CompletionProblem& problem, const Penalty& penalty,
                     double mu, const Matrix& x, const Vector& sigma_x) {
  const Matrix b = gradient_point(problem, mu, x);
  const SvdFactors factors = svd(b);
  const auto k = static_cast<std::size_t>(factors.sigma.size());
  if (static_cast<std::size_t>(sigma_x.size()) != k) {
    throw DomainError("irnn_step: sigma_x has the wrong length");
  }

  // g' is nonincreasing and sigma_x is nonincreasing, so the weights come
  // out ascending. An infinite weight only occurs at σ = 0, i.e. in the
  // tail; it becomes a threshold at or above σ₁(B), which zeroes the output
  // and keeps the sequence ascending.
  std::vector<double> w(k);
  double largest_finite = 0.0;
  std::size_t first_infinite = k;
  for (std::size_t i = 0; i < k; ++i) {
    const double s = sigma_x[static_cast<Eigen::Index>(i)];
    if (s > 0.0) {
      w[i] = penalty.grad(s) / mu;
    } else {
      const ExtendedReal g0 = penalty.grad_at_zero();
      if (!g0.is_finite()) {
        first_infinite = std::min(first_infinite, i);
        continue;
      }
      w[i] = g0.value() / mu;
    }
    largest_finite = std::max(largest_finite, w[i]);
  }
  const double cap = std::max(largest_finite, k > 0 ? factors.sigma[0] : 0.0);
  for (std::size_t i = first_infinite; i < k; ++i) w[i] = cap;

  GsvtResult r = weighted_svt(w, factors);
  return {std::move(r.x), std::move(r.shrunk_sigma)};
}

SolveResult gpg_solve(const CompletionProblem& problem, const SolverConfig& config,
                      const std::optional<Matrix>& init,
                      const std::optional<Matrix>& truth) {
  return run(problem, config, init, truth,
             [&](const Penalty& penalty, const Matrix& x, const Vector&) {
               return gpg_step(problem, penalty, config.mu, x, config.prox);
             });
}

SolveResult irnn_solve(const CompletionProblem& problem, const SolverConfig& config,
                       const std::optional<Matrix>& init,
                       const std::optional<Matrix>& truth) {
  return run(problem, config, init, truth,
             [&](const Penalty& penalty, const Matrix& x, const Vector& sigma) {
               return irnn_step(problem, penalty, config.mu, x, sigma);
             });
}

SolveResult convex_pg_solve(const CompletionProblem& problem,
                            const SolverConfig& config,
                            const std::optional<Matrix>& init,
                            const std::optional<Matrix>& truth) {
  SolverConfig convex = config;
  convex.penalty = Penalty::l1(config.lambda0);
  return gpg_solve(problem, convex, init, truth);
}

SolveResult solve(SolverKind kind, const CompletionProblem& problem,
                  const SolverConfig& config, const std::optional<Matrix>& init,
                  const std::optional<Matrix>& truth) {
  switch (kind) {
    case SolverKind::Gpg: return gpg_solve(problem, config, init, truth);
    case SolverKind::Irnn: return irnn_solve(problem, config, init, truth);
    case SolverKind::Convex: return convex_pg_solve(problem, config, init, truth);
  }
  throw DomainError("unknown solver kind");
}

}  // namespace gsvt
