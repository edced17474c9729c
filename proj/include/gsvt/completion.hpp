#pragma once

#include <vector>

#include "gsvt/penalty.hpp"
#include "gsvt/spectral.hpp"

namespace gsvt {

struct ObservedEntry {
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  double value = 0.0;

  friend bool operator==(const ObservedEntry&, const ObservedEntry&) = default;
};

/// Matrix completion data: shape, observed index set Ω and P_Ω(M).
class CompletionProblem {
 public:
  /// Throws DomainError on out-of-range or duplicate indices, an empty Ω,
  /// non-positive shape or non-finite values.
  CompletionProblem(Eigen::Index rows, Eigen::Index cols,
                    std::vector<ObservedEntry> entries);

  Eigen::Index rows() const noexcept { return rows_; }
  Eigen::Index cols() const noexcept { return cols_; }
  const std::vector<ObservedEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// P_Ω(M): observed values, zeros elsewhere.
  Matrix observed_matrix() const;
  /// ‖P_Ω(M)‖_∞.
  double max_abs_observed() const;

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  std::vector<ObservedEntry> entries_;
};

/// h(X) = ½‖P_Ω(X) - P_Ω(M)‖_F².
double loss_h(const CompletionProblem& problem, const Matrix& x);

/// ∇h(X) = P_Ω(X) - P_Ω(M). Its Lipschitz constant is 1.
Matrix grad_h(const CompletionProblem& problem, const Matrix& x);

/// F(X) = Σ g(σᵢ(X)) + h(X).
double objective_f(const CompletionProblem& problem, const Penalty& penalty,
                   const Matrix& x);
/// Same, with the singular values of X supplied by the caller.
double objective_f(const CompletionProblem& problem, const Penalty& penalty,
                   const Matrix& x, const Vector& sigma_x);

}  // namespace gsvt
