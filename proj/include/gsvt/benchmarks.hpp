#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gsvt/image.hpp"
#include "gsvt/metrics.hpp"
#include "gsvt/movielens.hpp"
#include "gsvt/solvers.hpp"

namespace gsvt {

/// Copy of `base` with λ₀ = lambda0_factor·‖P_Ω(M)‖_∞ and
/// λ_t = lambda_target_factor·λ₀.
SolverConfig with_schedule(const SolverConfig& base, const CompletionProblem& problem,
                           double lambda0_factor, double lambda_target_factor);

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Each index is
/// processed exactly once; the first exception thrown is rethrown.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& body);

struct SyntheticBenchConfig {
  Eigen::Index m = 150;
  Eigen::Index n = 150;
  std::vector<Eigen::Index> ranks{20};
  double observe_fraction = 0.5;
  double noise_sigma = 0.0;
  std::size_t seeds = 20;
  std::uint64_t master_seed = 0;
  std::vector<SolverKind> solvers{SolverKind::Gpg};
  double lambda0_factor = 0.9;
  double lambda_target_factor = 1e-5;
  /// Penalty, μ, decay, iteration cap and tolerance; λ fields are replaced
  /// per trial from the factors above.
  SolverConfig solver{};
  double success_threshold = kSuccessThreshold;
  std::size_t jobs = 1;
};

struct TrialRecord {
  SolverKind solver = SolverKind::Gpg;
  Eigen::Index rank = 0;
  std::size_t trial = 0;
  std::uint64_t data_seed = 0;
  double rel_err = 0.0;
  bool success = false;
  std::size_t iterations = 0;
  bool converged = false;
  double wall_time = 0.0;
};

struct AggregateRow {
  SolverKind solver = SolverKind::Gpg;
  Eigen::Index rank = 0;
  std::size_t trials = 0;
  /// Fraction of trials with rel_err below the success threshold.
  double fos = 0.0;
  double mean_rel_err = 0.0;
};

struct ExperimentResult {
  /// Sorted by (solver, rank, trial) regardless of scheduling.
  std::vector<TrialRecord> records;
  std::vector<AggregateRow> aggregate;
};

/// Seed of the synthetic instance for (rank, trial); shared by all solvers
/// so comparisons are paired.
std::uint64_t trial_seed(std::uint64_t master, Eigen::Index rank, std::size_t trial);

ExperimentResult run_synthetic_benchmark(const SyntheticBenchConfig& config);

std::vector<AggregateRow> aggregate_records(const std::vector<TrialRecord>& records);

/// Pixel data has a large mean, so the zero-filled start carries many big
/// spurious singular values; λ₀ starts well above them.
struct InpaintConfig {
  double missing_fraction = 0.4;
  std::uint64_t seed = 0;
  SolverKind solver = SolverKind::Gpg;
  SolverConfig solver_config{.penalty = Penalty::logarithm(1.0, 0.1), .decay = 0.95};
  double lambda0_factor = 20.0;
  double lambda_target_factor = 1e-3;
  std::size_t jobs = 1;
};

struct InpaintResult {
  Image recovered;
  /// PSNR of the clamped, rounded recovery against the original.
  ExtendedReal psnr = ExtendedReal::infinity();
  /// ‖X - M‖_F / ‖M‖_F pooled over channels (unclamped X).
  double rel_err = 0.0;
  std::size_t observed_per_channel = 0;
  std::vector<std::size_t> iterations;
};

/// Drops the same uniformly chosen pixels from every channel and completes
/// each channel independently.
InpaintResult inpaint(const Image& original, const InpaintConfig& config);

struct MovieLensConfig {
  double holdout_fraction = 0.2;
  std::uint64_t seed = 0;
  SolverKind solver = SolverKind::Gpg;
  SolverConfig solver_config{};
  double lambda0_factor = 10.0;
  double lambda_target_factor = 0.1;
  /// Evaluate on the training entries instead of the holdout (required
  /// when holdout_fraction is 0).
  bool evaluate_on_train = false;
};

struct MovieLensResult {
  double nmae = 0.0;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t iterations = 0;
  std::size_t duplicates = 0;
};

MovieLensResult run_movielens(const RatingsTable& ratings, const MovieLensConfig& config);

/// Noise-free frequency-of-success setup: 150×150 with ranks {20, 28, 33},
/// or 80×80 with ranks {11, 15, 18} when `reduced`. Logarithm penalty with
/// γ = 0.1, decay 0.97, tolerance 1e-7.
SyntheticBenchConfig noise_free_preset(bool reduced = false);

/// Noisy comparison: 150×150, noise 0.1, ranks {15, 25}, λ₀ = 10‖P_Ω(M)‖_∞,
/// λ_t = 0.1λ₀, Logarithm penalty with γ = 100.
SyntheticBenchConfig noisy_preset();

MovieLensConfig movielens_preset();

}  // namespace gsvt
