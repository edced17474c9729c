#pragma once

#include <span>

#include <Eigen/Dense>

#include "gsvt/penalty.hpp"
#include "gsvt/scalar_prox.hpp"

namespace gsvt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thin SVD B = U Diag(sigma) Vᵀ with sigma nonincreasing.
/// u is m×k, v is n×k, k = min(m, n).
struct SvdFactors {
  Matrix u;
  Vector sigma;
  Matrix v;
};

struct GsvtResult {
  Matrix x;
  Vector shrunk_sigma;
  Vector input_sigma;
};

/// Throws DomainError on non-finite input and NumericalError when the
/// decomposition reports failure.
SvdFactors svd(const Matrix& b);

Vector singular_values(const Matrix& b);

/// U Diag(sigma) Vᵀ, skipping zero entries of sigma.
Matrix compose(const SvdFactors& factors, const Vector& sigma);

/// Generalized singular value thresholding: the minimizer of
/// Σ g(σᵢ(X)) + ½‖X - B‖_F², obtained by applying the scalar prox to each
/// singular value of B. The shrunk spectrum is checked to be nonincreasing.
GsvtResult gsvt(const Penalty& penalty, const Matrix& b,
                const FixedPointConfig& config = {});
GsvtResult gsvt(const Penalty& penalty, const SvdFactors& factors,
                const FixedPointConfig& config = {});

/// Σ g(σᵢ(X)) + ½‖X - B‖_F².
double gsvt_objective(const Penalty& penalty, const Matrix& x, const Matrix& b);

/// U Diag(max(σᵢ(B) - wᵢ, 0)) Vᵀ. The weights must be finite, nonnegative
/// and ascending (one per singular value); descending weights are rejected
/// because the formula is not a minimizer of the weighted objective then.
Matrix weighted_svt(std::span<const double> weights, const Matrix& b);
GsvtResult weighted_svt(std::span<const double> weights,
                        const SvdFactors& factors);

/// Σ wᵢσᵢ(X) + ½‖X - B‖_F².
double weighted_objective(std::span<const double> weights, const Matrix& x,
                          const Matrix& b);

}  // namespace gsvt
