#pragma once

#include <cstddef>
#include <optional>

#include "gsvt/penalty.hpp"

namespace gsvt {

/// Stopping rules for the fixed-point search and the candidate tie test.
struct FixedPointConfig {
  /// Convergence when |x_{k+1} - x_k| <= relative_tolerance * max(1, b).
  double relative_tolerance = 1e-12;
  std::size_t max_iterations = 10000;
  /// Objective gap below which 0 and the stationary candidate count as tied.
  double tie_tolerance = 1e-12;

  /// Throws DomainError unless every field is strictly positive.
  void validate() const;
};

/// Result of minimizing f_b(x) = g(x) + (x - b)²/2 over x >= 0.
struct ProxOutcome {
  double minimizer = 0.0;
  /// Largest stationary point of f_b in [0, b]; absent when none exists.
  /// For SCAD, the best nonzero candidate of the piecewise enumeration.
  std::optional<double> stationary_candidate;
  double objective_at_zero = 0.0;
  std::optional<double> objective_at_candidate;
  std::size_t iterations = 0;
  bool tie = false;
};

struct StationarySearch {
  std::optional<double> point;
  std::size_t iterations = 0;
};

/// f_b(x) = penalty.value(x) + (x - b)²/2.
double prox_objective(const Penalty& penalty, double b, double x);

/// Fixed-point iteration x_{k+1} = b - g'(x_k) from x_0 = b. Returns the
/// largest stationary point of f_b in [0, b], or no point when an iterate
/// drops to zero or below. Requires penalty.satisfies_assumption1().
/// Throws ConvergenceError (carrying the last iterate) at the cap.
StationarySearch fixed_point_stationary(const Penalty& penalty, double b,
                                        const FixedPointConfig& config = {});

/// Prox_g(b) with a deterministic selection: ties between 0 and the
/// stationary candidate go to the nonzero candidate, which keeps the map
/// nondecreasing in b.
ProxOutcome prox(const Penalty& penalty, double b,
                 const FixedPointConfig& config = {});

/// Exhaustive minimization of f_b over {0, δ, 2δ, ..., b}; ties resolve to
/// the largest grid point. Test oracle.
double brute_force_prox(const Penalty& penalty, double b, double grid_step);

/// max(b - tau, 0).
double soft_threshold(double b, double tau);

}  // namespace gsvt
