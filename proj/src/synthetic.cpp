#include "gsvt/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gsvt/errors.hpp"
#include "gsvt/rng.hpp"

namespace gsvt {

void SyntheticSpec::validate() const {
  if (m <= 0 || n <= 0) throw DomainError("synthetic spec: m and n must be positive");
  if (rank <= 0 || rank > std::min(m, n)) {
    throw DomainError("synthetic spec: rank must lie in [1, min(m, n)]");
  }
  if (!(observe_fraction > 0.0 && observe_fraction <= 1.0)) {
    throw DomainError("synthetic spec: observe_fraction must lie in (0, 1]");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw DomainError("synthetic spec: noise_sigma must be >= 0");
  }
}

std::vector<Eigen::Index> sample_without_replacement(Eigen::Index total,
                                                     Eigen::Index count,
                                                     std::uint64_t seed) {
  if (count < 0 || count > total) {
    throw DomainError("sample_without_replacement: count out of range");
  }
  std::vector<Eigen::Index> all(static_cast<std::size_t>(total));
  std::iota(all.begin(), all.end(), Eigen::Index{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first `count` slots end up a uniform sample.
  for (Eigen::Index i = 0; i < count; ++i) {
    std::uniform_int_distribution<Eigen::Index> pick(i, total - 1);
    std::swap(all[static_cast<std::size_t>(i)],
              all[static_cast<std::size_t>(pick(rng))]);
  }
  all.resize(static_cast<std::size_t>(count));
  std::sort(all.begin(), all.end());
  return all;
}

SyntheticInstance gen_lowrank(const SyntheticSpec& spec) {
  spec.validate();
  Rng factors = make_rng(spec.seed, "factors");
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m1(spec.m, spec.rank);
  Matrix m2(spec.rank, spec.n);
  for (Eigen::Index j = 0; j < m1.cols(); ++j)
    for (Eigen::Index i = 0; i < m1.rows(); ++i) m1(i, j) = normal(factors);
  for (Eigen::Index j = 0; j < m2.cols(); ++j)
    for (Eigen::Index i = 0; i < m2.rows(); ++i) m2(i, j) = normal(factors);
  Matrix truth = m1 * m2;

  const Eigen::Index total = spec.m * spec.n;
  const auto count = static_cast<Eigen::Index>(
      std::llround(spec.observe_fraction * static_cast<double>(total)));
  const auto omega = sample_without_replacement(
      total, std::max<Eigen::Index>(count, 1), derive_seed(spec.seed, "omega"));

  Rng noise = make_rng(spec.seed, "noise");
  std::vector<ObservedEntry> entries;
  entries.reserve(omega.size());
  for (const Eigen::Index lin : omega) {
    const Eigen::Index r = lin / spec.n;
    const Eigen::Index c = lin % spec.n;
    double v = truth(r, c);
    if (spec.noise_sigma > 0.0) v += spec.noise_sigma * normal(noise);
    entries.push_back({r, c, v});
  }
  return {std::move(truth), CompletionProblem(spec.m, spec.n, std::move(entries))};
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> mask_uniform(
    Eigen::Index rows, Eigen::Index cols, double missing_fraction,
    std::uint64_t seed) {
  if (rows <= 0 || cols <= 0) throw DomainError("mask_uniform: shape must be positive");
  if (!(missing_fraction >= 0.0 && missing_fraction < 1.0)) {
    throw DomainError("mask_uniform: missing_fraction must lie in [0, 1)");
  }
  const Eigen::Index total = rows * cols;
  const auto missing = static_cast<Eigen::Index>(
      std::llround(missing_fraction * static_cast<double>(total)));
  const auto kept = sample_without_replacement(total, total - missing, seed);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  out.reserve(kept.size());
  for (const Eigen::Index lin : kept) out.emplace_back(lin / cols, lin % cols);
  return out;
}

}  // namespace gsvt
