#pragma once

#include <cstdint>
#include <vector>

#include "gsvt/completion.hpp"

namespace gsvt {

struct SyntheticSpec {
  Eigen::Index m = 150;
  Eigen::Index n = 150;
  Eigen::Index rank = 20;
  double observe_fraction = 0.5;
  /// Additive noise is noise_sigma·E with E standard normal.
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticInstance {
  Matrix truth;
  CompletionProblem problem;
};

/// M = M₁M₂ with standard normal M₁ (m×r) and M₂ (r×n); Ω drawn uniformly
/// without replacement with |Ω| = round(observe_fraction·m·n); observations
/// are M + noise_sigma·E on Ω. Entries of Ω are in row-major order.
SyntheticInstance gen_lowrank(const SyntheticSpec& spec);

/// `count` distinct linear indices from [0, total), sorted ascending.
std::vector<Eigen::Index> sample_without_replacement(Eigen::Index total,
                                                     Eigen::Index count,
                                                     std::uint64_t seed);

/// Positions kept after uniformly dropping round(missing_fraction·rows·cols)
/// pixels, as (row, col) pairs in row-major order. Shared across channels.
std::vector<std::pair<Eigen::Index, Eigen::Index>> mask_uniform(
    Eigen::Index rows, Eigen::Index cols, double missing_fraction,
    std::uint64_t seed);

}  // namespace gsvt
