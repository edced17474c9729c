#include "gsvt/completion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsvt/errors.hpp"

namespace gsvt {

CompletionProblem::CompletionProblem(Eigen::Index rows, Eigen::Index cols,
                                     std::vector<ObservedEntry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ <= 0 || cols_ <= 0) {
    throw DomainError("completion problem: shape must be positive");
  }
  if (entries_.empty()) {
    throw DomainError("completion problem: at least one observed entry is required");
  }
  for (const auto& e : entries_) {
    if (e.row < 0 || e.row >= rows_ || e.col < 0 || e.col >= cols_) {
      throw DomainError("completion problem: index (" + std::to_string(e.row) +
                        "," + std::to_string(e.col) + ") out of range");
    }
    if (!std::isfinite(e.value)) {
      throw DomainError("completion problem: non-finite observed value");
    }
  }
  std::vector<Eigen::Index> keys;
  keys.reserve(entries_.size());
  for (const auto& e : entries_) keys.push_back(e.row * cols_ + e.col);
  std::sort(keys.begin(), keys.end());
  const auto dup = std::adjacent_find(keys.begin(), keys.end());
  if (dup != keys.end()) {
    throw DomainError("completion problem: duplicate index (" +
                      std::to_string(*dup / cols_) + "," +
                      std::to_string(*dup % cols_) + ")");
  }
}

Matrix CompletionProblem::observed_matrix() const {
  Matrix m = Matrix::Zero(rows_, cols_);
  for (const auto& e : entries_) m(e.row, e.col) = e.value;
  return m;
}

double CompletionProblem::max_abs_observed() const {
  double best = 0.0;
  for (const auto& e : entries_) best = std::max(best, std::abs(e.value));
  return best;
}

namespace {

void require_shape(const CompletionProblem& problem, const Matrix& x,
                   const char* what) {
  if (x.rows() != problem.rows() || x.cols() != problem.cols()) {
    throw DomainError(std::string(what) + ": matrix shape does not match problem");
  }
}

}  // namespace

double loss_h(const CompletionProblem& problem, const Matrix& x) {
  require_shape(problem, x, "loss_h");
  double total = 0.0;
  for (const auto& e : problem.entries()) {
    const double d = x(e.row, e.col) - e.value;
    total += d * d;
  }
  return 0.5 * total;
}

Matrix grad_h(const CompletionProblem& problem, const Matrix& x) {
  require_shape(problem, x, "grad_h");
  Matrix g = Matrix::Zero(x.rows(), x.cols());
  for (const auto& e : problem.entries()) g(e.row, e.col) = x(e.row, e.col) - e.value;
  return g;
}

double objective_f(const CompletionProblem& problem, const Penalty& penalty,
                   const Matrix& x, const Vector& sigma_x) {
  double total = loss_h(problem, x);
  for (Eigen::Index i = 0; i < sigma_x.size(); ++i) total += penalty.value(sigma_x[i]);
  return total;
}

double objective_f(const CompletionProblem& problem, const Penalty& penalty,
                   const Matrix& x) {
  require_shape(problem, x, "objective_f");
  return objective_f(problem, penalty, x, singular_values(x));
}

}  // namespace gsvt
