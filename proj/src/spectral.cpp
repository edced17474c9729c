#include "gsvt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "gsvt/errors.hpp"

namespace gsvt {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DomainError(std::string(what) + ": shape mismatch");
  }
}

// Clamps sub-tolerance inversions and throws on real ones.
void enforce_nonincreasing(Vector& rho, double scale, const char* what) {
  const double slack = 1e-9 * std::max(1.0, scale);
  for (Eigen::Index i = 1; i < rho.size(); ++i) {
    if (rho[i] > rho[i - 1]) {
      if (rho[i] - rho[i - 1] > slack) {
        throw NumericalError(std::string(what) +
                             ": shrunk singular values are not nonincreasing");
      }
      rho[i] = rho[i - 1];
    }
  }
}

}  // namespace

SvdFactors svd(const Matrix& b) {
  if (!b.allFinite()) throw DomainError("svd: matrix has non-finite entries");
  const Eigen::Index k = std::min(b.rows(), b.cols());
  if (k == 0) return {Matrix(b.rows(), 0), Vector(0), Matrix(b.cols(), 0)};

  Eigen::BDCSVD<Matrix> dec(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw NumericalError("svd: decomposition failed to converge");
  }
  SvdFactors f{dec.matrixU(), dec.singularValues(), dec.matrixV()};
  if (!f.u.allFinite() || !f.v.allFinite() || !f.sigma.allFinite()) {
    throw NumericalError("svd: decomposition produced non-finite values");
  }

  const bool sorted = std::is_sorted(f.sigma.data(), f.sigma.data() + k,
                                     std::greater<>());
  if (!sorted) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto c) {
      return f.sigma[a] > f.sigma[c];
    });
    SvdFactors s{Matrix(f.u.rows(), k), Vector(k), Matrix(f.v.rows(), k)};
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto j = order[static_cast<std::size_t>(i)];
      s.u.col(i) = f.u.col(j);
      s.v.col(i) = f.v.col(j);
      s.sigma[i] = f.sigma[j];
    }
    f = std::move(s);
  }
  return f;
}

Vector singular_values(const Matrix& b) {
  if (!b.allFinite()) throw DomainError("svd: matrix has non-finite entries");
  if (std::min(b.rows(), b.cols()) == 0) return Vector(0);
  Eigen::BDCSVD<Matrix> dec(b);
  if (dec.info() != Eigen::Success) {
    throw NumericalError("svd: decomposition failed to converge");
  }
  return dec.singularValues();
}

Matrix compose(const SvdFactors& factors, const Vector& sigma) {
  Eigen::Index r = 0;
  while (r < sigma.size() && sigma[r] > 0.0) ++r;
  // Nonzero entries beyond the first zero would be dropped; sigma is
  // nonincreasing here so there are none.
  Matrix x(factors.u.rows(), factors.v.rows());
  if (r == 0) {
    x.setZero();
    return x;
  }
  x.noalias() = factors.u.leftCols(r) * sigma.head(r).asDiagonal() *
                factors.v.leftCols(r).transpose();
  return x;
}

GsvtResult gsvt(const Penalty& penalty, const SvdFactors& factors,
                const FixedPointConfig& config) {
  const Eigen::Index k = factors.sigma.size();
  Vector rho(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    rho[i] = prox(penalty, factors.sigma[i], config).minimizer;
  }
  enforce_nonincreasing(rho, k > 0 ? factors.sigma[0] : 0.0, "gsvt");
  return {compose(factors, rho), rho, factors.sigma};
}

GsvtResult gsvt(const Penalty& penalty, const Matrix& b,
                const FixedPointConfig& config) {
  return gsvt(penalty, svd(b), config);
}

double gsvt_objective(const Penalty& penalty, const Matrix& x, const Matrix& b) {
  require_same_shape(x, b, "gsvt_objective");
  const Vector s = singular_values(x);
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) total += penalty.value(s[i]);
  return total + 0.5 * (x - b).squaredNorm();
}

GsvtResult weighted_svt(std::span<const double> weights,
                        const SvdFactors& factors) {
  const auto k = static_cast<std::size_t>(factors.sigma.size());
  if (weights.size() != k) {
    throw DomainError("weighted_svt: need one weight per singular value");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      throw DomainError("weighted_svt: weights must be finite and >= 0");
    }
    if (i > 0 && weights[i] < weights[i - 1]) {
      throw DomainError(
          "weighted_svt: weights must be ascending (w1 <= w2 <= ...); "
          "the per-value shrinkage is not optimal otherwise");
    }
  }
  Vector rho(factors.sigma.size());
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<Eigen::Index>(i);
    rho[j] = std::max(factors.sigma[j] - weights[i], 0.0);
  }
  enforce_nonincreasing(rho, k > 0 ? factors.sigma[0] : 0.0, "weighted_svt");
  return {compose(factors, rho), rho, factors.sigma};
}

Matrix weighted_svt(std::span<const double> weights, const Matrix& b) {
  return weighted_svt(weights, svd(b)).x;
}

double weighted_objective(std::span<const double> weights, const Matrix& x,
                          const Matrix& b) {
  require_same_shape(x, b, "weighted_objective");
  const Vector s = singular_values(x);
  if (weights.size() != static_cast<std::size_t>(s.size())) {
    throw DomainError("weighted_objective: need one weight per singular value");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    total += weights[static_cast<std::size_t>(i)] * s[i];
  }
  return total + 0.5 * (x - b).squaredNorm();
}

}  // namespace gsvt
