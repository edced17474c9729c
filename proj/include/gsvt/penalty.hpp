#pragma once

#include <string>
#include <string_view>

namespace gsvt {

enum class PenaltyFamily { L1, Lp, Scad, Logarithm, Mcp, Geman, Laplace };

std::string_view family_name(PenaltyFamily family);

/// A nonnegative real that may also be +infinity. Used for the penalty
/// gradient at zero, where the infinite case changes which branch of the
/// prox analysis applies.
class ExtendedReal {
 public:
  static ExtendedReal infinity() { return ExtendedReal(); }
  static ExtendedReal finite(double v) { return ExtendedReal(v); }

  bool is_finite() const noexcept { return finite_; }
  /// Throws DomainError when infinite.
  double value() const;

  friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

 private:
  ExtendedReal() : finite_(false), value_(0.0) {}
  explicit ExtendedReal(double v) : finite_(true), value_(v) {}

  bool finite_;
  double value_;
};

/// Concave sparsity penalty g(θ) on θ ≥ 0, multiplied by a positive scale s.
///
/// Families and their parameters:
///   L1         λθ
///   Lp         λθ^p,                               0 < p < 1
///   SCAD       λθ, then (-θ²+2γλθ-λ²)/(2(γ-1)), then λ²(γ+1)/2,
///              with knots at λ and γλ;              γ > 1
///   Logarithm  λ log(γθ+1) / log(γ+1),             γ > 0
///   MCP        λθ - θ²/(2γ) below γλ, γλ²/2 above, γ > 1
///   Geman      λθ / (θ+γ),                          γ > 1
///   Laplace    λ(1 - exp(-θ/γ)),                    γ > 1
///
/// The scale multiplies the whole function, so `scaled(1/μ)` realizes g/μ
/// without remapping λ or γ.
class Penalty {
 public:
  /// Validates all parameters; throws DomainError on violations.
  Penalty(PenaltyFamily family, double lambda, double gamma = 0.0,
          double p = 0.0, double scale = 1.0);

  static Penalty l1(double lambda) { return {PenaltyFamily::L1, lambda}; }
  static Penalty lp(double lambda, double p) {
    return {PenaltyFamily::Lp, lambda, 0.0, p};
  }
  static Penalty scad(double lambda, double gamma) {
    return {PenaltyFamily::Scad, lambda, gamma};
  }
  static Penalty logarithm(double lambda, double gamma) {
    return {PenaltyFamily::Logarithm, lambda, gamma};
  }
  static Penalty mcp(double lambda, double gamma) {
    return {PenaltyFamily::Mcp, lambda, gamma};
  }
  static Penalty geman(double lambda, double gamma) {
    return {PenaltyFamily::Geman, lambda, gamma};
  }
  static Penalty laplace(double lambda, double gamma) {
    return {PenaltyFamily::Laplace, lambda, gamma};
  }

  PenaltyFamily family() const noexcept { return family_; }
  double lambda() const noexcept { return lambda_; }
  double gamma() const noexcept { return gamma_; }
  double p() const noexcept { return p_; }
  double scale() const noexcept { return scale_; }

  bool uses_gamma() const noexcept;

  /// Same penalty with the scale multiplied by `factor`.
  Penalty scaled(double factor) const;
  /// Same penalty with λ replaced.
  Penalty with_lambda(double lambda) const;

  /// s·g(θ) for θ ≥ 0.
  double value(double theta) const;
  /// s·g'(θ) for θ > 0; left derivative at SCAD/MCP piece boundaries.
  double grad(double theta) const;
  /// lim θ→0⁺ of grad(θ).
  ExtendedReal grad_at_zero() const;

  /// True for the families whose prox is computed by the fixed-point
  /// solver: concave, nondecreasing, differentiable, convex gradient.
  /// SCAD fails the convex-gradient condition; L1 is convex and uses the
  /// soft-threshold closed form.
  bool satisfies_assumption1() const noexcept;

  friend bool operator==(const Penalty&, const Penalty&) = default;

 private:
  PenaltyFamily family_;
  double lambda_;
  double gamma_;
  double p_;
  double scale_;
};

}  // namespace gsvt
