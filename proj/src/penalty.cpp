#include "gsvt/penalty.hpp"

#include <cmath>
#include <string>

#include "gsvt/errors.hpp"

namespace gsvt {

std::string_view family_name(PenaltyFamily family) {
  switch (family) {
    case PenaltyFamily::L1: return "l1";
    case PenaltyFamily::Lp: return "lp";
    case PenaltyFamily::Scad: return "scad";
    case PenaltyFamily::Logarithm: return "logarithm";
    case PenaltyFamily::Mcp: return "mcp";
    case PenaltyFamily::Geman: return "geman";
    case PenaltyFamily::Laplace: return "laplace";
  }
  return "unknown";
}

double ExtendedReal::value() const {
  if (!finite_) throw DomainError("extended real is +infinity");
  return value_;
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

Penalty::Penalty(PenaltyFamily family, double lambda, double gamma, double p,
                 double scale)
    : family_(family), lambda_(lambda), gamma_(gamma), p_(p), scale_(scale) {
  const std::string name(family_name(family));
  require(positive_finite(lambda), name + ": lambda must be positive and finite");
  require(positive_finite(scale), name + ": scale must be positive and finite");
  switch (family) {
    case PenaltyFamily::Lp:
      require(std::isfinite(p) && p > 0.0 && p < 1.0,
              "lp: p must lie in (0, 1)");
      break;
    case PenaltyFamily::Logarithm:
      require(positive_finite(gamma), "logarithm: gamma must be positive");
      break;
    case PenaltyFamily::Scad:
    case PenaltyFamily::Mcp:
    case PenaltyFamily::Geman:
    case PenaltyFamily::Laplace:
      require(std::isfinite(gamma) && gamma > 1.0,
              name + ": gamma must be greater than 1");
      break;
    case PenaltyFamily::L1:
      break;
  }
}

bool Penalty::uses_gamma() const noexcept {
  return family_ != PenaltyFamily::L1 && family_ != PenaltyFamily::Lp;
}

Penalty Penalty::scaled(double factor) const {
  return Penalty(family_, lambda_, gamma_, p_, scale_ * factor);
}

Penalty Penalty::with_lambda(double lambda) const {
  return Penalty(family_, lambda, gamma_, p_, scale_);
}

double Penalty::value(double theta) const {
  if (!(theta >= 0.0)) throw DomainError("penalty value: theta must be >= 0");
  const double lam = lambda_;
  const double gam = gamma_;
  double g = 0.0;
  switch (family_) {
    case PenaltyFamily::L1:
      g = lam * theta;
      break;
    case PenaltyFamily::Lp:
      g = lam * std::pow(theta, p_);
      break;
    case PenaltyFamily::Scad:
      if (theta <= lam) {
        g = lam * theta;
      } else if (theta <= gam * lam) {
        g = (-theta * theta + 2.0 * gam * lam * theta - lam * lam) /
            (2.0 * (gam - 1.0));
      } else {
        g = lam * lam * (gam + 1.0) / 2.0;
      }
      break;
    case PenaltyFamily::Logarithm:
      g = lam / std::log1p(gam) * std::log1p(gam * theta);
      break;
    case PenaltyFamily::Mcp:
      g = theta < gam * lam ? lam * theta - theta * theta / (2.0 * gam)
                            : 0.5 * gam * lam * lam;
      break;
    case PenaltyFamily::Geman:
      g = lam * theta / (theta + gam);
      break;
    case PenaltyFamily::Laplace:
      g = -lam * std::expm1(-theta / gam);
      break;
  }
  return scale_ * g;
}

double Penalty::grad(double theta) const {
  if (!(theta > 0.0)) {
    throw DomainError("penalty grad: theta must be > 0 (use grad_at_zero)");
  }
  const double lam = lambda_;
  const double gam = gamma_;
  double d = 0.0;
  switch (family_) {
    case PenaltyFamily::L1:
      d = lam;
      break;
    case PenaltyFamily::Lp:
      d = lam * p_ * std::pow(theta, p_ - 1.0);
      break;
    case PenaltyFamily::Scad:
      if (theta <= lam) {
        d = lam;
      } else if (theta <= gam * lam) {
        d = (gam * lam - theta) / (gam - 1.0);
      } else {
        d = 0.0;
      }
      break;
    case PenaltyFamily::Logarithm:
      d = lam * gam / (std::log1p(gam) * (gam * theta + 1.0));
      break;
    case PenaltyFamily::Mcp:
      // Left derivative at θ = γλ is λ - λ = 0, so the two pieces agree.
      d = theta < gam * lam ? lam - theta / gam : 0.0;
      break;
    case PenaltyFamily::Geman:
      d = lam * gam / ((theta + gam) * (theta + gam));
      break;
    case PenaltyFamily::Laplace:
      d = lam / gam * std::exp(-theta / gam);
      break;
  }
  return scale_ * d;
}

ExtendedReal Penalty::grad_at_zero() const {
  double d = 0.0;
  switch (family_) {
    case PenaltyFamily::Lp:
      return ExtendedReal::infinity();
    case PenaltyFamily::L1:
    case PenaltyFamily::Scad:
    case PenaltyFamily::Mcp:
      d = lambda_;
      break;
    case PenaltyFamily::Logarithm:
      d = lambda_ * gamma_ / std::log1p(gamma_);
      break;
    case PenaltyFamily::Geman:
    case PenaltyFamily::Laplace:
      d = lambda_ / gamma_;
      break;
  }
  return ExtendedReal::finite(scale_ * d);
}

bool Penalty::satisfies_assumption1() const noexcept {
  switch (family_) {
    case PenaltyFamily::Lp:
    case PenaltyFamily::Logarithm:
    case PenaltyFamily::Mcp:
    case PenaltyFamily::Geman:
    case PenaltyFamily::Laplace:
      return true;
    case PenaltyFamily::L1:
    case PenaltyFamily::Scad:
      return false;
  }
  return false;
}

}  // namespace gsvt
