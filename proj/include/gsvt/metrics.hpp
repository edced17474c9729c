#pragma once

#include <span>

#include "gsvt/completion.hpp"
#include "gsvt/penalty.hpp"

namespace gsvt {

/// ‖X - M‖_F / ‖M‖_F. Throws DomainError for a zero truth.
double rel_err(const Matrix& x, const Matrix& truth);

/// Recovery threshold used for frequency of success.
inline constexpr double kSuccessThreshold = 1e-3;

/// 10·log₁₀(255² / MSE) in decibels; +∞ when the images are identical.
ExtendedReal psnr(const Matrix& original, const Matrix& recovered);
/// Pools the MSE over several channels of equal shape.
ExtendedReal psnr(std::span<const Matrix> original, std::span<const Matrix> recovered);

/// ‖P_Ω(X) - P_Ω(M)‖₁ / |Ω| over the evaluation entries.
double nmae(const Matrix& x, std::span<const ObservedEntry> eval);

}  // namespace gsvt
