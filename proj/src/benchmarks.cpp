#include "gsvt/benchmarks.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include "gsvt/errors.hpp"
#include "gsvt/rng.hpp"
#include "gsvt/synthetic.hpp"

namespace gsvt {

SolverConfig with_schedule(const SolverConfig& base, const CompletionProblem& problem,
                           double lambda0_factor, double lambda_target_factor) {
  if (!(lambda0_factor > 0.0) || !(lambda_target_factor > 0.0) ||
      lambda_target_factor > 1.0) {
    throw DomainError("lambda factors must satisfy lambda0 > 0 and 0 < target <= 1");
  }
  const double scale = problem.max_abs_observed();
  if (!(scale > 0.0)) throw DomainError("observed values are all zero");
  SolverConfig cfg = base;
  cfg.lambda0 = lambda0_factor * scale;
  cfg.lambda_target = lambda_target_factor * cfg.lambda0;
  return cfg;
}

void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& body) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t trial_seed(std::uint64_t master, Eigen::Index rank, std::size_t trial) {
  return derive_seed(derive_seed(master, "synthetic-rank", static_cast<std::uint64_t>(rank)),
                     "synthetic-trial", trial);
}

std::vector<AggregateRow> aggregate_records(const std::vector<TrialRecord>& records) {
  std::vector<AggregateRow> rows;
  for (const auto& r : records) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const AggregateRow& a) {
      return a.solver == r.solver && a.rank == r.rank;
    });
    if (it == rows.end()) {
      rows.push_back({r.solver, r.rank, 0, 0.0, 0.0});
      it = rows.end() - 1;
    }
    ++it->trials;
    it->fos += r.success ? 1.0 : 0.0;
    it->mean_rel_err += r.rel_err;
  }
  for (auto& a : rows) {
    a.fos /= static_cast<double>(a.trials);
    a.mean_rel_err /= static_cast<double>(a.trials);
  }
  std::sort(rows.begin(), rows.end(), [](const AggregateRow& a, const AggregateRow& b) {
    return std::pair(a.solver, a.rank) < std::pair(b.solver, b.rank);
  });
  return rows;
}

ExperimentResult run_synthetic_benchmark(const SyntheticBenchConfig& config) {
  if (config.ranks.empty() || config.solvers.empty() || config.seeds == 0) {
    throw DomainError("benchmark needs at least one rank, solver and seed");
  }
  struct Task {
    Eigen::Index rank;
    std::size_t trial;
  };
  std::vector<Task> tasks;
  for (const auto rank : config.ranks)
    for (std::size_t t = 0; t < config.seeds; ++t) tasks.push_back({rank, t});

  const std::size_t per_task = config.solvers.size();
  std::vector<TrialRecord> records(tasks.size() * per_task);
  parallel_for(tasks.size(), config.jobs, [&](std::size_t i) {
    const Task task = tasks[i];
    SyntheticSpec spec;
    spec.m = config.m;
    spec.n = config.n;
    spec.rank = task.rank;
    spec.observe_fraction = config.observe_fraction;
    spec.noise_sigma = config.noise_sigma;
    spec.seed = trial_seed(config.master_seed, task.rank, task.trial);
    const SyntheticInstance inst = gen_lowrank(spec);
    const SolverConfig cfg = with_schedule(config.solver, inst.problem,
                                           config.lambda0_factor,
                                           config.lambda_target_factor);
    for (std::size_t s = 0; s < per_task; ++s) {
      const auto start = std::chrono::steady_clock::now();
      const SolveResult res = solve(config.solvers[s], inst.problem, cfg);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      TrialRecord& rec = records[i * per_task + s];
      rec.solver = config.solvers[s];
      rec.rank = task.rank;
      rec.trial = task.trial;
      rec.data_seed = spec.seed;
      rec.rel_err = rel_err(res.x, inst.truth);
      rec.success = rec.rel_err < config.success_threshold;
      rec.iterations = res.trace.iterations;
      rec.converged = res.trace.converged;
      rec.wall_time = secs;
    }
  });

  std::sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return std::tuple(a.solver, a.rank, a.trial) < std::tuple(b.solver, b.rank, b.trial);
  });
  ExperimentResult result;
  result.aggregate = aggregate_records(records);
  result.records = std::move(records);
  return result;
}

InpaintResult inpaint(const Image& original, const InpaintConfig& config) {
  if (original.channels.empty()) throw DomainError("inpaint: image has no channels");
  const Eigen::Index rows = original.rows();
  const Eigen::Index cols = original.cols();
  const auto kept = mask_uniform(rows, cols, config.missing_fraction,
                                 derive_seed(config.seed, "inpaint-mask"));

  const std::size_t channels = original.channels.size();
  InpaintResult out;
  out.observed_per_channel = kept.size();
  out.iterations.assign(channels, 0);
  std::vector<Matrix> completed(channels);
  parallel_for(channels, config.jobs, [&](std::size_t ch) {
    const Matrix& m = original.channels[ch];
    std::vector<ObservedEntry> entries;
    entries.reserve(kept.size());
    for (const auto& [r, c] : kept) entries.push_back({r, c, m(r, c)});
    const CompletionProblem problem(rows, cols, std::move(entries));
    if (kept.size() == static_cast<std::size_t>(rows * cols)) {
      completed[ch] = m;
      return;
    }
    if (problem.max_abs_observed() == 0.0) {
      completed[ch] = Matrix::Zero(rows, cols);
      return;
    }
    const SolverConfig cfg = with_schedule(config.solver_config, problem,
                                           config.lambda0_factor,
                                           config.lambda_target_factor);
    SolveResult res = solve(config.solver, problem, cfg);
    out.iterations[ch] = res.trace.iterations;
    completed[ch] = std::move(res.x);
  });

  double err = 0.0;
  double ref = 0.0;
  for (std::size_t ch = 0; ch < channels; ++ch) {
    err += (completed[ch] - original.channels[ch]).squaredNorm();
    ref += original.channels[ch].squaredNorm();
  }
  out.rel_err = ref > 0.0 ? std::sqrt(err / ref) : std::sqrt(err);

  out.recovered.channels.resize(channels);
  for (std::size_t ch = 0; ch < channels; ++ch) {
    out.recovered.channels[ch] =
        completed[ch].unaryExpr([](double v) { return std::clamp(std::round(v), 0.0, 255.0); });
  }
  out.psnr = psnr(original.channels, out.recovered.channels);
  return out;
}

MovieLensResult run_movielens(const RatingsTable& ratings, const MovieLensConfig& config) {
  const MovieLensSplit split = split_ratings(ratings, config.holdout_fraction, config.seed);
  const bool on_train = config.evaluate_on_train || split.test.empty();
  const SolverConfig cfg = with_schedule(config.solver_config, split.train,
                                         config.lambda0_factor, config.lambda_target_factor);
  const SolveResult res = solve(config.solver, split.train, cfg);

  MovieLensResult out;
  out.rows = split.train.rows();
  out.cols = split.train.cols();
  out.train_size = split.train.size();
  out.test_size = split.test.size();
  out.iterations = res.trace.iterations;
  out.duplicates = split.duplicates;
  out.nmae = on_train ? nmae(res.x, split.train.entries()) : nmae(res.x, split.test);
  return out;
}

}  // namespace gsvt

namespace gsvt {

SyntheticBenchConfig noise_free_preset(bool reduced) {
  SyntheticBenchConfig c;
  c.m = c.n = reduced ? 80 : 150;
  c.ranks = reduced ? std::vector<Eigen::Index>{11, 15, 18}
                    : std::vector<Eigen::Index>{20, 28, 33};
  c.observe_fraction = 0.5;
  c.seeds = 20;
  c.solvers = {SolverKind::Gpg, SolverKind::Irnn, SolverKind::Convex};
  c.lambda0_factor = 0.9;
  c.lambda_target_factor = 1e-5;
  c.solver.penalty = Penalty::logarithm(1.0, 0.1);
  c.solver.decay = 0.97;
  c.solver.step_tolerance = 1e-7;
  c.solver.max_iterations = 600;
  return c;
}

SyntheticBenchConfig noisy_preset() {
  SyntheticBenchConfig c;
  c.ranks = {15, 25};
  c.noise_sigma = 0.1;
  c.seeds = 20;
  c.solvers = {SolverKind::Gpg, SolverKind::Irnn, SolverKind::Convex};
  c.lambda0_factor = 10.0;
  c.lambda_target_factor = 0.1;
  c.solver.penalty = Penalty::logarithm(1.0, 100.0);
  c.solver.decay = 0.9;
  c.solver.step_tolerance = 1e-6;
  c.solver.max_iterations = 500;
  return c;
}

MovieLensConfig movielens_preset() {
  MovieLensConfig c;
  c.lambda0_factor = 100.0;
  c.lambda_target_factor = 0.1;
  c.solver_config.penalty = Penalty::logarithm(1.0, 0.1);
  c.solver_config.decay = 0.8;
  c.solver_config.step_tolerance = 1e-4;
  c.solver_config.max_iterations = 50;
  return c;
}

}  // namespace gsvt
