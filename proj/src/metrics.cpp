#include "gsvt/metrics.hpp"

#include <cmath>

#include "gsvt/errors.hpp"

namespace gsvt {

double rel_err(const Matrix& x, const Matrix& truth) {
  if (x.rows() != truth.rows() || x.cols() != truth.cols()) {
    throw DomainError("rel_err: shape mismatch");
  }
  const double denom = truth.norm();
  if (denom == 0.0) throw DomainError("rel_err: truth has zero norm");
  return (x - truth).norm() / denom;
}

ExtendedReal psnr(std::span<const Matrix> original, std::span<const Matrix> recovered) {
  if (original.size() != recovered.size() || original.empty()) {
    throw DomainError("psnr: channel count mismatch");
  }
  double sq = 0.0;
  double count = 0.0;
  for (std::size_t c = 0; c < original.size(); ++c) {
    if (original[c].rows() != recovered[c].rows() ||
        original[c].cols() != recovered[c].cols()) {
      throw DomainError("psnr: shape mismatch");
    }
    sq += (original[c] - recovered[c]).squaredNorm();
    count += static_cast<double>(original[c].size());
  }
  if (count == 0.0) throw DomainError("psnr: empty image");
  const double mse = sq / count;
  if (mse == 0.0) return ExtendedReal::infinity();
  return ExtendedReal::finite(10.0 * std::log10(255.0 * 255.0 / mse));
}

ExtendedReal psnr(const Matrix& original, const Matrix& recovered) {
  return psnr(std::span<const Matrix>(&original, 1),
              std::span<const Matrix>(&recovered, 1));
}

double nmae(const Matrix& x, std::span<const ObservedEntry> eval) {
  if (eval.empty()) throw DomainError("nmae: evaluation set is empty");
  double total = 0.0;
  for (const auto& e : eval) {
    if (e.row < 0 || e.row >= x.rows() || e.col < 0 || e.col >= x.cols()) {
      throw DomainError("nmae: index out of range");
    }
    total += std::abs(x(e.row, e.col) - e.value);
  }
  return total / static_cast<double>(eval.size());
}

}  // namespace gsvt
