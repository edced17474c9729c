#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gsvt/benchmarks.hpp"
#include "gsvt/errors.hpp"
#include "gsvt/solvers.hpp"
#include "gsvt/synthetic.hpp"
#include "oracles.hpp"

using namespace gsvt;
using doctest::Approx;

namespace {

CompletionProblem full_problem(const Matrix& m) {
  std::vector<ObservedEntry> e;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) e.push_back({i, j, m(i, j)});
  return CompletionProblem(m.rows(), m.cols(), std::move(e));
}

SyntheticInstance small_instance(std::uint64_t seed, Eigen::Index n = 40, Eigen::Index r = 3,
                                 double noise = 0.0) {
  SyntheticSpec spec;
  spec.m = spec.n = n;
  spec.rank = r;
  spec.observe_fraction = 0.5;
  spec.noise_sigma = noise;
  spec.seed = seed;
  return gen_lowrank(spec);
}

SolverConfig fixed_lambda(const Penalty& pen, double lambda, std::size_t iters) {
  SolverConfig c;
  c.penalty = pen;
  c.lambda0 = c.lambda_target = lambda;
  c.max_iterations = iters;
  c.step_tolerance = 1e-12;
  return c;
}

}  // namespace

TEST_SUITE("lowrank_solvers") {

TEST_CASE("completion problem validation") {
  CHECK_THROWS_AS(CompletionProblem(2, 2, {}), DomainError);
  CHECK_THROWS_AS(CompletionProblem(2, 2, {{2, 0, 1.0}}), DomainError);
  CHECK_THROWS_AS(CompletionProblem(2, 2, {{0, -1, 1.0}}), DomainError);
  CHECK_THROWS_AS(CompletionProblem(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}}), DomainError);
  CHECK_THROWS_AS(CompletionProblem(2, 2, {{0, 0, NAN}}), DomainError);
  CHECK_THROWS_AS(CompletionProblem(0, 2, {{0, 0, 1.0}}), DomainError);
  const CompletionProblem p(2, 3, {{1, 2, -4.0}, {0, 0, 1.5}});
  CHECK(p.max_abs_observed() == 4.0);
  CHECK(p.observed_matrix()(1, 2) == -4.0);
  CHECK(p.observed_matrix()(0, 1) == 0.0);
}

TEST_CASE("grad_h examples") {
  const CompletionProblem p(2, 2, {{0, 0, 1.0}, {1, 1, -2.0}});
  Matrix x = Matrix::Zero(2, 2);
  x(0, 0) = 1.0;
  x(1, 1) = -2.0;
  x(0, 1) = 5.0;
  CHECK(grad_h(p, x).isZero(0.0));

  std::mt19937_64 rng(40);
  const Matrix m = oracle::random_matrix(rng, 3, 4);
  const Matrix y = oracle::random_matrix(rng, 3, 4);
  CHECK((grad_h(full_problem(m), y) - (y - m)).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(grad_h(p, Matrix::Zero(3, 2)), DomainError);
}

TEST_CASE("grad_h matches finite differences of h") {
  const SyntheticInstance inst = small_instance(41, 6, 2);
  std::mt19937_64 rng(42);
  const Matrix x = oracle::random_matrix(rng, 6, 6);
  const Matrix g = grad_h(inst.problem, x);
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = 0; j < 6; ++j) {
      auto h_at = [&](double t) {
        Matrix y = x;
        y(i, j) = t;
        return loss_h(inst.problem, y);
      };
      CHECK(std::abs(oracle::central_difference(h_at, x(i, j)) - g(i, j)) <= 1e-6);
    }
  }
}

TEST_CASE("objective_f examples") {
  const CompletionProblem zeros(2, 2, {{0, 0, 0.0}, {1, 0, 0.0}});
  CHECK(objective_f(zeros, Penalty::mcp(1, 2), Matrix::Zero(2, 2)) == 0.0);

  const CompletionProblem p(2, 2, {{0, 0, 3.0}, {1, 0, -4.0}});
  CHECK(objective_f(p, Penalty::mcp(1, 2), Matrix::Zero(2, 2)) == 12.5);

  const CompletionProblem one(5, 4, {{0, 0, 1.0}});
  std::mt19937_64 rng(43);
  for (int t = 0; t < 10; ++t) {
    const Matrix x = oracle::random_matrix(rng, 5, 4);
    const double lam = oracle::uniform(rng, 0.1, 2.0);
    const double want = lam * oracle::nuclear_norm_eig(x) + loss_h(one, x);
    CHECK(objective_f(one, Penalty::l1(lam), x) == Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("fully observed noise-free data is recovered") {
  std::mt19937_64 rng(44);
  const Matrix m = oracle::random_matrix(rng, 30, 4) * oracle::random_matrix(rng, 4, 30);
  const CompletionProblem p = full_problem(m);
  SolverConfig c;
  c.penalty = Penalty::logarithm(1, 1.5);
  c.lambda0 = 0.9 * p.max_abs_observed();
  c.lambda_target = 1e-5 * c.lambda0;
  c.max_iterations = 2000;
  const SolveResult r = gpg_solve(p, c);
  CHECK(rel_err(r.x, m) < 1e-3);

  const SolveResult cvx = convex_pg_solve(p, c);
  CHECK(rel_err(cvx.x, m) < 1e-3);
}

TEST_CASE("descent with margin at fixed lambda") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SyntheticInstance inst = small_instance(seed);
    const SolverConfig c = fixed_lambda(Penalty::logarithm(1, 1.5), 5.0, 60);
    const SolveResult r = gpg_solve(inst.problem, c);
    const auto& t = r.trace;
    for (std::size_t k = 0; k < t.iterations; ++k) {
      const double margin = 0.5 * (c.mu - 1.0) * t.step_norm[k] * t.step_norm[k];
      CHECK(t.objective_before[k] - t.objective[k] >=
            margin - 1e-8 * std::max(1.0, t.objective_before[k]));
      if (k + 1 < t.iterations) CHECK(t.objective_before[k + 1] == t.objective[k]);
    }
  }
}

TEST_CASE("trace shape and convergence flag") {
  const SyntheticInstance inst = small_instance(5);
  SolverConfig c;
  c.penalty = Penalty::logarithm(1, 0.1);
  c.lambda0 = 0.9 * inst.problem.max_abs_observed();
  c.lambda_target = 1e-3 * c.lambda0;
  c.max_iterations = 400;
  const SolveResult r = gpg_solve(inst.problem, c, std::nullopt, inst.truth);
  const auto& t = r.trace;
  CHECK(t.objective.size() == t.iterations);
  CHECK(t.objective_before.size() == t.iterations);
  CHECK(t.step_norm.size() == t.iterations);
  CHECK(t.lambda.size() == t.iterations);
  REQUIRE(t.rel_err.has_value());
  CHECK(t.rel_err->size() == t.iterations);
  CHECK(t.lambda.front() == c.lambda0);
  for (std::size_t k = 1; k < t.iterations; ++k) {
    CHECK(t.lambda[k] == Approx(std::max(c.decay * t.lambda[k - 1], c.lambda_target)));
  }
  REQUIRE(t.converged);
  CHECK(t.lambda.back() == c.lambda_target);
  CHECK(t.step_norm.back() < c.step_tolerance * std::max(1.0, r.x.norm() + t.step_norm.back()));
  for (double s : t.step_norm) CHECK(s >= 0.0);
}

TEST_CASE("IRNN with vanishing weights is a gradient step") {
  std::mt19937_64 rng(45);
  const Matrix m = 5.0 * oracle::random_matrix(rng, 6, 6);
  std::vector<ObservedEntry> e;
  for (Eigen::Index i = 0; i < 6; ++i) e.push_back({i, (i * 2) % 6, m(i, (i * 2) % 6)});
  const CompletionProblem p(6, 6, e);
  Matrix x = Matrix::Identity(6, 6) * 10.0 + 0.1 * oracle::random_matrix(rng, 6, 6);
  const Vector sx = singular_values(x);
  const Penalty mcp = Penalty::mcp(1, 1.5);
  REQUIRE(sx.minCoeff() >= 1.5);
  const StepResult s = irnn_step(p, mcp, 1.1, x, sx);
  const Matrix want = x - grad_h(p, x) / 1.1;
  CHECK((s.x - want).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("IRNN zeroes singular values with infinite weight") {
  const SyntheticInstance inst = small_instance(46, 10, 2);
  const Matrix x = inst.truth;
  const Vector sx = singular_values(x);
  REQUIRE(sx[9] < 1e-8 * sx[0]);
  Vector sx_exact = sx;
  for (Eigen::Index i = 2; i < sx.size(); ++i) sx_exact[i] = 0.0;
  const StepResult s = irnn_step(inst.problem, Penalty::lp(0.1, 0.5), 1.1, x, sx_exact);
  for (Eigen::Index i = 2; i < s.sigma.size(); ++i) CHECK(s.sigma[i] == 0.0);
  CHECK(s.sigma[0] > 0.0);
}

TEST_CASE("IRNN weights stay ascending across a run") {
  const SyntheticInstance inst = small_instance(47);
  for (const Penalty& pen : {Penalty::lp(1, 0.5), Penalty::logarithm(1, 1.5),
                             Penalty::mcp(1, 1.5), Penalty::geman(1, 1.5),
                             Penalty::laplace(1, 1.5), Penalty::scad(1, 3)}) {
    SolverConfig c;
    c.penalty = pen;
    c.lambda0 = 0.9 * inst.problem.max_abs_observed();
    c.lambda_target = 1e-2 * c.lambda0;
    c.max_iterations = 60;
    CHECK_NOTHROW(irnn_solve(inst.problem, c));
  }
}

TEST_CASE("GPG decreases the objective at least as fast as IRNN") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const SyntheticInstance inst = small_instance(seed, 40, 3, 0.1);
    const double lam = inst.problem.max_abs_observed();
    const SolverConfig c = fixed_lambda(Penalty::logarithm(1, 1.5), lam, 30);
    const SolveResult g = gpg_solve(inst.problem, c);
    const SolveResult i = irnn_solve(inst.problem, c);
    CHECK(g.trace.objective.front() <= i.trace.objective.front() + 1e-9);
    CHECK(g.trace.objective.back() <= i.trace.objective.back() + 1e-9);
  }
}

TEST_CASE("one IRNN step decreases the objective no more than one GPG step") {
  const SyntheticInstance inst = small_instance(48, 30, 3, 0.1);
  const double lam = inst.problem.max_abs_observed();
  const Penalty pen = Penalty::logarithm(lam, 1.5);
  const double mu = 1.1;
  Matrix x = inst.problem.observed_matrix();
  int compared = 0;
  for (int k = 0; k < 40; k += 4) {
    const Vector sx = singular_values(x);
    const double f0 = objective_f(inst.problem, pen, x, sx);
    const StepResult g = gpg_step(inst.problem, pen, mu, x);
    const StepResult i = irnn_step(inst.problem, pen, mu, x, sx);
    const double dg = f0 - objective_f(inst.problem, pen, g.x, g.sigma);
    const double di = f0 - objective_f(inst.problem, pen, i.x, i.sigma);
    CHECK(di <= dg + 1e-9 * std::max(1.0, f0));
    ++compared;
    for (int s = 0; s < 4; ++s) x = gpg_step(inst.problem, pen, mu, x).x;
  }
  CHECK(compared == 10);
}

TEST_CASE("convex baseline is GPG with L1") {
  const SyntheticInstance inst = small_instance(49);
  SolverConfig c;
  c.lambda0 = 0.9 * inst.problem.max_abs_observed();
  c.lambda_target = 1e-3 * c.lambda0;
  c.max_iterations = 50;
  SolverConfig l1 = c;
  l1.penalty = Penalty::l1(1.0);
  const SolveResult a = convex_pg_solve(inst.problem, c);
  const SolveResult b = gpg_solve(inst.problem, l1);
  CHECK(a.x == b.x);
  CHECK(a.trace.objective == b.trace.objective);
}

TEST_CASE("convex baseline fails where GPG succeeds") {
  const SyntheticBenchConfig preset = noise_free_preset(true);
  SyntheticSpec spec;
  spec.m = spec.n = preset.m;
  spec.rank = preset.ranks.front();
  spec.seed = trial_seed(0, spec.rank, 0);
  const SyntheticInstance inst = gen_lowrank(spec);
  const SolverConfig c = with_schedule(preset.solver, inst.problem, preset.lambda0_factor,
                                       preset.lambda_target_factor);
  CHECK(rel_err(gpg_solve(inst.problem, c).x, inst.truth) < 1e-3);
  CHECK(rel_err(convex_pg_solve(inst.problem, c).x, inst.truth) >= 1e-3);
}

TEST_CASE("solves are deterministic") {
  const SyntheticInstance inst = small_instance(50);
  SolverConfig c;
  c.lambda0 = 0.9 * inst.problem.max_abs_observed();
  c.lambda_target = 1e-2 * c.lambda0;
  c.max_iterations = 40;
  for (SolverKind k : {SolverKind::Gpg, SolverKind::Irnn, SolverKind::Convex}) {
    const SolveResult a = solve(k, inst.problem, c);
    const SolveResult b = solve(k, inst.problem, c);
    CHECK(a.x == b.x);
    CHECK(a.trace.objective == b.trace.objective);
  }
}

TEST_CASE("solver config validation") {
  const SyntheticInstance inst = small_instance(51, 8, 2);
  SolverConfig c;
  c.mu = 1.0;
  CHECK_THROWS_AS(gpg_solve(inst.problem, c), DomainError);
  c = {};
  c.decay = 1.0;
  CHECK_THROWS_AS(gpg_solve(inst.problem, c), DomainError);
  c = {};
  c.lambda0 = 1.0;
  c.lambda_target = 2.0;
  CHECK_THROWS_AS(gpg_solve(inst.problem, c), DomainError);
  c = {};
  c.max_iterations = 0;
  CHECK_THROWS_AS(gpg_solve(inst.problem, c), DomainError);
  c = {};
  CHECK_THROWS_AS(gpg_solve(inst.problem, c, Matrix::Zero(3, 3)), DomainError);
  CHECK_THROWS_AS(gpg_solve(inst.problem, c, std::nullopt, Matrix::Zero(8, 8)), DomainError);
  CHECK_THROWS_AS(parse_solver_kind("apgl"), DomainError);
  CHECK(parse_solver_kind("irnn") == SolverKind::Irnn);
  CHECK(solver_name(SolverKind::Convex) == "convex");
}

}

TEST_SUITE("lowrank_solvers_slow") {

TEST_CASE("desk-scale recovery at rank 20") {
  const SyntheticBenchConfig preset = noise_free_preset(false);
  int ok = 0;
  for (std::size_t t = 0; t < 20; ++t) {
    SyntheticSpec spec;
    spec.rank = 20;
    spec.seed = trial_seed(7, 20, t);
    const SyntheticInstance inst = gen_lowrank(spec);
    const SolverConfig c = with_schedule(preset.solver, inst.problem, preset.lambda0_factor,
                                         preset.lambda_target_factor);
    ok += rel_err(gpg_solve(inst.problem, c).x, inst.truth) < kSuccessThreshold;
  }
  MESSAGE("successes: " << ok << "/20");
  CHECK(ok >= 18);
}

}
