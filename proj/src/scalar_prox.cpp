#include "gsvt/scalar_prox.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "gsvt/errors.hpp"

namespace gsvt {

void FixedPointConfig::validate() const {
  if (!(relative_tolerance > 0.0) || !(tie_tolerance > 0.0) ||
      max_iterations == 0) {
    throw DomainError("fixed-point config fields must be strictly positive");
  }
}

double prox_objective(const Penalty& penalty, double b, double x) {
  const double d = x - b;
  return penalty.value(x) + 0.5 * d * d;
}

double soft_threshold(double b, double tau) {
  if (!(b >= 0.0) || !(tau >= 0.0)) {
    throw DomainError("soft_threshold: b and tau must be >= 0");
  }
  return std::max(b - tau, 0.0);
}

namespace {

void require_nonnegative(double b) {
  if (!(b >= 0.0) || !std::isfinite(b)) {
    throw DomainError("prox: b must be finite and >= 0");
  }
}

ProxOutcome finish(const Penalty& penalty, double b,
                   std::optional<double> candidate, std::size_t iterations,
                   double tie_tolerance) {
  ProxOutcome out;
  out.stationary_candidate = candidate;
  out.objective_at_zero = 0.5 * b * b;
  out.iterations = iterations;
  if (!candidate) return out;
  const double fc = prox_objective(penalty, b, *candidate);
  out.objective_at_candidate = fc;
  const double gap = out.objective_at_zero - fc;
  out.tie = std::abs(gap) <= tie_tolerance;
  if (out.tie || gap > 0.0) out.minimizer = *candidate;
  return out;
}

// SCAD: f_b is piecewise quadratic, so the minimizer is among the knots, the
// clipped stationary points of each piece, and the interval ends 0 and b.
ProxOutcome scad_prox(const Penalty& penalty, double b, double tie_tolerance) {
  const double lam = penalty.lambda();
  const double gam = penalty.gamma();
  const double s = penalty.scale();

  std::array<double, 7> candidates{};
  std::size_t count = 0;
  const auto add = [&](double x) {
    if (x >= 0.0 && x <= b) candidates[count++] = x;
  };
  add(0.0);
  add(b);
  add(lam);
  add(gam * lam);
  add(std::clamp(b - s * lam, 0.0, lam));
  const double curvature = 1.0 - s / (gam - 1.0);
  if (curvature != 0.0) {
    const double x = (b - s * gam * lam / (gam - 1.0)) / curvature;
    if (x > lam && x <= gam * lam) add(x);
  }
  if (b > gam * lam) add(b);

  // Smallest objective among nonzero candidates, then the largest candidate
  // within tie tolerance of it.
  double best_value = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < count; ++i) {
    if (candidates[i] <= 0.0) continue;
    const double v = prox_objective(penalty, b, candidates[i]);
    if (!any || v < best_value) best_value = v;
    any = true;
  }
  std::optional<double> best_nonzero;
  for (std::size_t i = 0; any && i < count; ++i) {
    const double x = candidates[i];
    if (x <= 0.0) continue;
    if (prox_objective(penalty, b, x) <= best_value + tie_tolerance &&
        (!best_nonzero || x > *best_nonzero)) {
      best_nonzero = x;
    }
  }
  return finish(penalty, b, best_nonzero, 0, tie_tolerance);
}

}  // namespace

StationarySearch fixed_point_stationary(const Penalty& penalty, double b,
                                        const FixedPointConfig& config) {
  require_nonnegative(b);
  config.validate();
  if (!penalty.satisfies_assumption1()) {
    throw DomainError("fixed_point_stationary: penalty '" +
                      std::string(family_name(penalty.family())) +
                      "' does not satisfy the convex-gradient assumption");
  }
  if (b <= 0.0) return {};
  if (penalty.grad(b) == 0.0) return {b, 0};

  const double tol = config.relative_tolerance * std::max(1.0, b);
  double x = b;
  for (std::size_t k = 1; k <= config.max_iterations; ++k) {
    const double next = b - penalty.grad(x);
    if (next <= 0.0) return {std::nullopt, k};
    if (std::abs(next - x) <= tol) return {std::min(next, b), k};
    x = next;
  }
  throw ConvergenceError("fixed-point iteration did not converge for b = " +
                             std::to_string(b),
                         x);
}

ProxOutcome prox(const Penalty& penalty, double b,
                 const FixedPointConfig& config) {
  require_nonnegative(b);
  config.validate();
  switch (penalty.family()) {
    case PenaltyFamily::L1: {
      const double x = soft_threshold(b, penalty.scale() * penalty.lambda());
      return finish(penalty, b, x > 0.0 ? std::optional<double>(x) : std::nullopt,
                    0, config.tie_tolerance);
    }
    case PenaltyFamily::Scad:
      return scad_prox(penalty, b, config.tie_tolerance);
    default: {
      const StationarySearch found = fixed_point_stationary(penalty, b, config);
      return finish(penalty, b, found.point, found.iterations,
                    config.tie_tolerance);
    }
  }
}

double brute_force_prox(const Penalty& penalty, double b, double grid_step) {
  require_nonnegative(b);
  if (!(grid_step > 0.0)) throw DomainError("brute_force_prox: grid_step must be > 0");
  double best_x = 0.0;
  double best_v = prox_objective(penalty, b, 0.0);
  const auto steps = static_cast<std::size_t>(std::floor(b / grid_step));
  for (std::size_t i = 1; i <= steps; ++i) {
    const double x = static_cast<double>(i) * grid_step;
    if (x > b) break;
    const double v = prox_objective(penalty, b, x);
    if (v <= best_v) {
      best_v = v;
      best_x = x;
    }
  }
  if (best_x < b) {
    const double v = prox_objective(penalty, b, b);
    if (v <= best_v) best_x = b;
  }
  return best_x;
}

}  // namespace gsvt
