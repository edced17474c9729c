#include "gsvt_cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <memory>
#include <optional>
#include <sstream>

#include "gsvt/benchmarks.hpp"
#include "gsvt/errors.hpp"
#include "gsvt/matrix_io.hpp"
#include "gsvt/penalty_spec.hpp"
#include "gsvt/spectral.hpp"
#include "gsvt/synthetic.hpp"
#include "gsvt/version.hpp"

namespace gsvt::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: digest init failed");
  }
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) {
      EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return hex.str();
}

namespace {

json extended(const ExtendedReal& v) {
  if (v.is_finite()) return v.value();
  return "inf";
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json penalty_json(const Penalty& p) {
  json j;
  j["spec"] = to_penalty_spec(p);
  j["family"] = std::string(family_name(p.family()));
  j["lambda"] = p.lambda();
  if (p.uses_gamma()) j["gamma"] = p.gamma();
  if (p.family() == PenaltyFamily::Lp) j["p"] = p.p();
  return j;
}

json prox_config_json(const FixedPointConfig& c) {
  return {{"relative_tolerance", c.relative_tolerance},
          {"max_iterations", c.max_iterations},
          {"tie_tolerance", c.tie_tolerance}};
}

json solver_config_json(const SolverConfig& c) {
  return {{"penalty", penalty_json(c.penalty)},
          {"mu", c.mu},
          {"lambda0", c.lambda0},
          {"lambda_target", c.lambda_target},
          {"decay", c.decay},
          {"max_iterations", c.max_iterations},
          {"step_tolerance", c.step_tolerance},
          {"prox", prox_config_json(c.prox)}};
}

json prox_json(double b, const ProxOutcome& o) {
  json j;
  j["b"] = b;
  j["minimizer"] = o.minimizer;
  j["stationary_candidate"] =
      o.stationary_candidate ? json(*o.stationary_candidate) : json(nullptr);
  j["objective_at_zero"] = o.objective_at_zero;
  j["objective_at_candidate"] =
      o.objective_at_candidate ? json(*o.objective_at_candidate) : json(nullptr);
  json cands = json::array({0.0});
  json objs = json::array({o.objective_at_zero});
  if (o.stationary_candidate) {
    cands.push_back(*o.stationary_candidate);
    objs.push_back(*o.objective_at_candidate);
  }
  j["candidates"] = cands;
  j["objectives"] = objs;
  j["iterations"] = o.iterations;
  j["tie"] = o.tie;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

// Shared flags. Values are only applied when the flag was given, so each
// subcommand keeps its own defaults.
struct Common {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string out_dir;
  std::string penalty;
  double mu = 0.0;
  double lambda0 = 0.0;
  double lambda_target = 0.0;
  double lambda0_factor = 0.0;
  double lambda_target_factor = 0.0;
  double decay = 0.0;
  std::size_t max_iters = 0;
  double tol = 0.0;
  double prox_tol = 0.0;
  std::size_t prox_max_iters = 0;

  // Point at the options of the subcommand that was actually parsed.
  const CLI::Option* o_penalty = nullptr;
  const CLI::Option* o_mu = nullptr;
  const CLI::Option* o_lambda0 = nullptr;
  const CLI::Option* o_lambda_target = nullptr;
  const CLI::Option* o_lambda0_factor = nullptr;
  const CLI::Option* o_lambda_target_factor = nullptr;
  const CLI::Option* o_decay = nullptr;
  const CLI::Option* o_max_iters = nullptr;
  const CLI::Option* o_tol = nullptr;
  const CLI::Option* o_prox_tol = nullptr;
  const CLI::Option* o_prox_max_iters = nullptr;

  void bind(const CLI::App* sub) {
    o_penalty = sub->get_option_no_throw("--penalty");
    o_mu = sub->get_option_no_throw("--mu");
    o_lambda0 = sub->get_option_no_throw("--lambda0");
    o_lambda_target = sub->get_option_no_throw("--lambda-target");
    o_lambda0_factor = sub->get_option_no_throw("--lambda0-factor");
    o_lambda_target_factor = sub->get_option_no_throw("--lambda-target-factor");
    o_decay = sub->get_option_no_throw("--decay");
    o_max_iters = sub->get_option_no_throw("--max-iters");
    o_tol = sub->get_option_no_throw("--tol");
    o_prox_tol = sub->get_option_no_throw("--prox-tol");
    o_prox_max_iters = sub->get_option_no_throw("--prox-max-iters");
  }
};

void add_run_flags(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--out", c.out_dir, "Directory for output files");
}

void add_prox_flags(CLI::App* app, Common& c) {
  app->add_option("--prox-tol", c.prox_tol, "Fixed-point relative tolerance");
  app->add_option("--prox-max-iters", c.prox_max_iters, "Fixed-point iteration cap");
}

void add_solver_flags(CLI::App* app, Common& c) {
  app->add_option("--penalty", c.penalty,
                  "Penalty spec, e.g. logarithm:gamma=1.5 (lambda is scheduled)");
  app->add_option("--mu", c.mu, "Proximal weight (> 1)");
  app->add_option("--lambda0", c.lambda0, "Absolute initial lambda");
  app->add_option("--lambda-target", c.lambda_target, "Absolute target lambda");
  app->add_option("--lambda0-factor", c.lambda0_factor,
                  "Initial lambda as a multiple of max |observed|");
  app->add_option("--lambda-target-factor", c.lambda_target_factor,
                  "Target lambda as a multiple of the initial lambda");
  app->add_option("--decay", c.decay, "Per-iteration lambda decay");
  app->add_option("--max-iters", c.max_iters, "Iteration cap");
  app->add_option("--tol", c.tol, "Relative step tolerance");
  add_prox_flags(app, c);
}

bool given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

// The λ in a solver penalty is replaced by the schedule, so it may be left out.
Penalty parse_solver_penalty(const std::string& spec) {
  std::string lower = spec;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower.find("lambda") != std::string::npos) return parse_penalty_spec(spec);
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return parse_penalty_spec(spec + ":lambda=1");
  const bool empty_tail = colon + 1 == spec.size();
  return parse_penalty_spec(spec.substr(0, colon + 1) + "lambda=1" +
                            (empty_tail ? "" : ",") + spec.substr(colon + 1));
}

void apply_prox(const Common& c, FixedPointConfig& p) {
  if (given(c.o_prox_tol)) p.relative_tolerance = c.prox_tol;
  if (given(c.o_prox_max_iters)) p.max_iterations = c.prox_max_iters;
}

void apply_solver(const Common& c, SolverConfig& s) {
  if (given(c.o_penalty)) s.penalty = parse_solver_penalty(c.penalty);
  if (given(c.o_mu)) s.mu = c.mu;
  if (given(c.o_decay)) s.decay = c.decay;
  if (given(c.o_max_iters)) s.max_iterations = c.max_iters;
  if (given(c.o_tol)) s.step_tolerance = c.tol;
  apply_prox(c, s.prox);
}

void apply_factors(const Common& c, double& f0, double& ft) {
  if (given(c.o_lambda0_factor)) f0 = c.lambda0_factor;
  if (given(c.o_lambda_target_factor)) ft = c.lambda_target_factor;
}

// Absolute λ flags override the factor schedule.
SolverConfig resolve_schedule(const Common& c, const SolverConfig& base,
                              const CompletionProblem& problem, double f0, double ft) {
  SolverConfig cfg = with_schedule(base, problem, f0, ft);
  if (given(c.o_lambda0)) cfg.lambda0 = c.lambda0;
  if (given(c.o_lambda_target)) cfg.lambda_target = c.lambda_target;
  if (given(c.o_lambda0) && !given(c.o_lambda_target)) {
    cfg.lambda_target = std::min(cfg.lambda_target, cfg.lambda0);
  }
  cfg.validate();
  return cfg;
}

struct Invocation {
  std::string subcommand;
  std::vector<std::string> argv;
  const Common* common = nullptr;
  json inputs = json::object();

  void add_input(const fs::path& path) { inputs[path.string()] = sha256_file(path); }

  json manifest(json config) const {
    json m;
    m["subcommand"] = subcommand;
    m["version"] = std::string(kVersion);
    m["seed"] = common->seed;
    m["jobs"] = common->jobs;
    m["argv"] = argv;
    m["config"] = std::move(config);
    m["inputs"] = inputs;
    return m;
  }
};

std::optional<fs::path> out_dir(const Common& c) {
  if (c.out_dir.empty()) return std::nullopt;
  fs::create_directories(c.out_dir);
  return fs::path(c.out_dir);
}

void emit(std::ostream& out, json result, const json& manifest, const Common& c) {
  result["manifest"] = manifest;
  if (auto dir = out_dir(c)) {
    write_text(*dir / "manifest.json", manifest.dump(2) + "\n");
    write_text(*dir / "result.json", result.dump(2) + "\n");
  }
  out << result.dump(2) << "\n";
}

std::string trace_jsonl(const SolveTrace& t) {
  std::string s;
  for (std::size_t k = 0; k < t.iterations; ++k) {
    json line = {{"iteration", k},
                 {"lambda", t.lambda[k]},
                 {"objective_before", t.objective_before[k]},
                 {"objective", t.objective[k]},
                 {"step_norm", t.step_norm[k]}};
    if (t.rel_err) line["rel_err"] = (*t.rel_err)[k];
    s += line.dump() + "\n";
  }
  return s;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string records_csv(const std::vector<TrialRecord>& records) {
  std::string s = "solver,rank,trial,data_seed,rel_err,success,iterations,converged,wall_time\n";
  for (const auto& r : records) {
    s += std::string(solver_name(r.solver)) + "," + std::to_string(r.rank) + "," +
         std::to_string(r.trial) + "," + std::to_string(r.data_seed) + "," +
         format_double(r.rel_err) + "," + (r.success ? "1" : "0") + "," +
         std::to_string(r.iterations) + "," + (r.converged ? "1" : "0") + "," +
         format_double(r.wall_time) + "\n";
  }
  return s;
}

json aggregate_json(const std::vector<AggregateRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) {
    a.push_back({{"solver", std::string(solver_name(r.solver))},
                 {"rank", r.rank},
                 {"trials", r.trials},
                 {"fos", r.fos},
                 {"mean_rel_err", r.mean_rel_err}});
  }
  return a;
}

// Subcommands -------------------------------------------------------------

struct ProxArgs {
  std::string penalty;
  std::vector<double> b;
};

void cmd_prox(const ProxArgs& a, Invocation& inv, std::ostream& out) {
  const Penalty penalty = parse_penalty_spec(a.penalty);
  FixedPointConfig cfg;
  apply_prox(*inv.common, cfg);
  cfg.validate();

  json config = {{"penalty", penalty_json(penalty)}, {"prox", prox_config_json(cfg)},
                 {"b", a.b}};
  json result;
  if (a.b.size() == 1) {
    result = prox_json(a.b[0], prox(penalty, a.b[0], cfg));
  } else {
    json rows = json::array();
    for (double b : a.b) rows.push_back(prox_json(b, prox(penalty, b, cfg)));
    result["results"] = std::move(rows);
  }
  emit(out, std::move(result), inv.manifest(config), *inv.common);
}

struct GsvtArgs {
  std::vector<std::string> positional;
  std::string penalty;
  std::string matrix;
  std::vector<double> weights;
};

void cmd_gsvt(const GsvtArgs& a, Invocation& inv, std::ostream& out) {
  const Matrix b = read_matrix_csv(a.matrix);
  inv.add_input(a.matrix);
  FixedPointConfig cfg;
  apply_prox(*inv.common, cfg);
  cfg.validate();

  json config = {{"matrix", a.matrix}, {"prox", prox_config_json(cfg)}};
  json result;
  GsvtResult r;
  if (!a.weights.empty()) {
    r = weighted_svt(a.weights, svd(b));
    config["weights"] = a.weights;
    result["objective"] = weighted_objective(a.weights, r.x, b);
  } else {
    const Penalty penalty = parse_penalty_spec(a.penalty);
    r = gsvt(penalty, b, cfg);
    config["penalty"] = penalty_json(penalty);
    result["objective"] = gsvt_objective(penalty, r.x, b);
  }
  result["rows"] = b.rows();
  result["cols"] = b.cols();
  result["input_sigma"] = vector_json(r.input_sigma);
  result["shrunk_sigma"] = vector_json(r.shrunk_sigma);
  result["rank"] = (r.shrunk_sigma.array() > 0.0).count();
  if (auto dir = out_dir(*inv.common)) write_matrix_csv(*dir / "x.csv", r.x);
  emit(out, std::move(result), inv.manifest(config), *inv.common);
}

struct CompleteArgs {
  std::string omega;
  std::string matrix;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::string solver = "gpg";
};

void cmd_complete(const CompleteArgs& a, Invocation& inv, std::ostream& out) {
  const Common& c = *inv.common;
  std::optional<Matrix> truth;
  Eigen::Index rows = a.rows;
  Eigen::Index cols = a.cols;
  if (!a.matrix.empty()) {
    truth = read_matrix_csv(a.matrix);
    inv.add_input(a.matrix);
    if ((rows != 0 && rows != truth->rows()) || (cols != 0 && cols != truth->cols())) {
      throw DomainError("--rows/--cols disagree with the matrix shape");
    }
    rows = truth->rows();
    cols = truth->cols();
  }
  if (rows <= 0 || cols <= 0) {
    throw DomainError("complete needs --matrix or positive --rows and --cols");
  }
  std::vector<ObservedEntry> entries = read_entries_csv(a.omega);
  inv.add_input(a.omega);
  const CompletionProblem problem(rows, cols, std::move(entries));

  const SolverKind kind = parse_solver_kind(a.solver);
  SolverConfig base;
  apply_solver(c, base);
  double f0 = 0.9;
  double ft = 1e-5;
  apply_factors(c, f0, ft);
  const SolverConfig cfg = resolve_schedule(c, base, problem, f0, ft);

  const SolveResult res = solve(kind, problem, cfg, std::nullopt, truth);

  json config = {{"solver", std::string(solver_name(kind))},
                 {"omega", a.omega},
                 {"matrix", a.matrix.empty() ? json(nullptr) : json(a.matrix)},
                 {"rows", rows},
                 {"cols", cols},
                 {"lambda0_factor", f0},
                 {"lambda_target_factor", ft},
                 {"solver_config", solver_config_json(cfg)}};
  json result;
  result["rows"] = rows;
  result["cols"] = cols;
  result["observed"] = problem.size();
  result["iterations"] = res.trace.iterations;
  result["converged"] = res.trace.converged;
  result["objective"] = res.trace.objective.empty() ? 0.0 : res.trace.objective.back();
  const Vector sigma = singular_values(res.x);
  result["rank"] = (sigma.array() > 1e-9 * std::max(1.0, sigma.size() ? sigma[0] : 0.0)).count();
  if (truth) result["rel_err"] = rel_err(res.x, *truth);
  if (auto dir = out_dir(c)) {
    write_matrix_csv(*dir / "x.csv", res.x);
    write_text(*dir / "trace.jsonl", trace_jsonl(res.trace));
  }
  emit(out, std::move(result), inv.manifest(config), c);
}

struct BenchArgs {
  std::string preset;
  Eigen::Index m = 0;
  Eigen::Index n = 0;
  std::vector<Eigen::Index> ranks;
  double observe = 0.0;
  double noise = 0.0;
  std::size_t seeds = 0;
  std::vector<std::string> solvers;
  double success_threshold = 0.0;
  CLI::Option* o_m = nullptr;
  CLI::Option* o_n = nullptr;
  CLI::Option* o_observe = nullptr;
  CLI::Option* o_noise = nullptr;
  CLI::Option* o_seeds = nullptr;
  CLI::Option* o_threshold = nullptr;
};

SyntheticBenchConfig bench_base(const std::string& preset) {
  if (preset.empty() || preset == "default") return SyntheticBenchConfig{};
  if (preset == "noise-free") return noise_free_preset(false);
  if (preset == "noise-free-small") return noise_free_preset(true);
  if (preset == "noisy") return noisy_preset();
  throw DomainError("unknown preset '" + preset +
                    "' (expected noise-free, noise-free-small or noisy)");
}

void cmd_bench(const BenchArgs& a, Invocation& inv, std::ostream& out) {
  const Common& c = *inv.common;
  SyntheticBenchConfig cfg = bench_base(a.preset);
  if (given(a.o_m)) cfg.m = a.m;
  if (given(a.o_n)) cfg.n = a.n;
  if (!a.ranks.empty()) cfg.ranks = a.ranks;
  if (given(a.o_observe)) cfg.observe_fraction = a.observe;
  if (given(a.o_noise)) cfg.noise_sigma = a.noise;
  if (given(a.o_seeds)) cfg.seeds = a.seeds;
  if (given(a.o_threshold)) cfg.success_threshold = a.success_threshold;
  if (!a.solvers.empty()) {
    cfg.solvers.clear();
    for (const auto& s : a.solvers) cfg.solvers.push_back(parse_solver_kind(s));
  }
  if (given(c.o_lambda0) || given(c.o_lambda_target)) {
    throw DomainError("bench-synthetic schedules lambda per trial; use "
                      "--lambda0-factor and --lambda-target-factor");
  }
  apply_solver(c, cfg.solver);
  apply_factors(c, cfg.lambda0_factor, cfg.lambda_target_factor);
  cfg.master_seed = c.seed;
  cfg.jobs = c.jobs;

  const ExperimentResult res = run_synthetic_benchmark(cfg);

  json solvers = json::array();
  for (auto k : cfg.solvers) solvers.push_back(std::string(solver_name(k)));
  SolverConfig shown = cfg.solver;
  json config = {{"preset", a.preset.empty() ? "default" : a.preset},
                 {"m", cfg.m},
                 {"n", cfg.n},
                 {"ranks", cfg.ranks},
                 {"observe_fraction", cfg.observe_fraction},
                 {"noise_sigma", cfg.noise_sigma},
                 {"seeds", cfg.seeds},
                 {"solvers", solvers},
                 {"lambda0_factor", cfg.lambda0_factor},
                 {"lambda_target_factor", cfg.lambda_target_factor},
                 {"success_threshold", cfg.success_threshold},
                 {"solver_config", solver_config_json(shown)}};
  json result;
  result["aggregate"] = aggregate_json(res.aggregate);
  if (auto dir = out_dir(c)) {
    write_text(*dir / "records.csv", records_csv(res.records));
    write_text(*dir / "aggregate.json", result["aggregate"].dump(2) + "\n");
  }
  emit(out, std::move(result), inv.manifest(config), c);
}

struct InpaintArgs {
  std::string image;
  double missing = 0.4;
  std::string solver = "gpg";
  CLI::Option* o_missing = nullptr;
};

void cmd_inpaint(const InpaintArgs& a, Invocation& inv, std::ostream& out) {
  const Common& c = *inv.common;
  const Image original = load_image(a.image);
  inv.add_input(a.image);

  InpaintConfig cfg;
  if (given(a.o_missing)) cfg.missing_fraction = a.missing;
  cfg.seed = c.seed;
  cfg.jobs = c.jobs;
  cfg.solver = parse_solver_kind(a.solver);
  if (given(c.o_lambda0) || given(c.o_lambda_target)) {
    throw DomainError("inpaint schedules lambda per channel; use "
                      "--lambda0-factor and --lambda-target-factor");
  }
  apply_solver(c, cfg.solver_config);
  apply_factors(c, cfg.lambda0_factor, cfg.lambda_target_factor);

  const InpaintResult res = inpaint(original, cfg);

  json config = {{"image", a.image},
                 {"missing_fraction", cfg.missing_fraction},
                 {"solver", std::string(solver_name(cfg.solver))},
                 {"lambda0_factor", cfg.lambda0_factor},
                 {"lambda_target_factor", cfg.lambda_target_factor},
                 {"solver_config", solver_config_json(cfg.solver_config)}};
  json result;
  result["psnr"] = extended(res.psnr);
  result["rel_err"] = res.rel_err;
  result["observed_per_channel"] = res.observed_per_channel;
  result["iterations"] = res.iterations;
  if (auto dir = out_dir(c)) {
    const char* name = res.recovered.channels.size() == 1 ? "recovered.pgm" : "recovered.ppm";
    save_image(*dir / name, res.recovered);
    result["recovered"] = (*dir / name).string();
  }
  emit(out, std::move(result), inv.manifest(config), c);
}

struct MovieLensArgs {
  std::string path;
  double holdout = 0.2;
  std::string solver = "gpg";
  bool eval_train = false;
  CLI::Option* o_holdout = nullptr;
};

void cmd_movielens(const MovieLensArgs& a, Invocation& inv, std::ostream& out,
                   std::ostream& err) {
  const Common& c = *inv.common;
  const RatingsTable table = read_ratings(a.path);
  inv.add_input(a.path);
  if (table.duplicates > 0) {
    err << "warning: " << table.duplicates
        << " duplicate (user, item) ratings; kept the last of each\n";
  }

  MovieLensConfig cfg = movielens_preset();
  if (given(a.o_holdout)) cfg.holdout_fraction = a.holdout;
  cfg.seed = c.seed;
  cfg.solver = parse_solver_kind(a.solver);
  cfg.evaluate_on_train = a.eval_train;
  if (given(c.o_lambda0) || given(c.o_lambda_target)) {
    throw DomainError("movielens schedules lambda from the data; use "
                      "--lambda0-factor and --lambda-target-factor");
  }
  apply_solver(c, cfg.solver_config);
  apply_factors(c, cfg.lambda0_factor, cfg.lambda_target_factor);

  const MovieLensResult res = run_movielens(table, cfg);

  json config = {{"ratings", a.path},
                 {"holdout_fraction", cfg.holdout_fraction},
                 {"solver", std::string(solver_name(cfg.solver))},
                 {"evaluate_on_train", cfg.evaluate_on_train},
                 {"lambda0_factor", cfg.lambda0_factor},
                 {"lambda_target_factor", cfg.lambda_target_factor},
                 {"solver_config", solver_config_json(cfg.solver_config)}};
  json result;
  result["nmae"] = res.nmae;
  result["rows"] = res.rows;
  result["cols"] = res.cols;
  result["train_size"] = res.train_size;
  result["test_size"] = res.test_size;
  result["evaluated_on"] = (cfg.evaluate_on_train || res.test_size == 0) ? "train" : "test";
  result["duplicates"] = res.duplicates;
  result["iterations"] = res.iterations;
  emit(out, std::move(result), inv.manifest(config), c);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized singular value thresholding toolkit", "gsvt"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Common common;
  Invocation inv;
  inv.common = &common;
  inv.argv = args;

  ProxArgs prox_args;
  auto* prox_cmd = app.add_subcommand("prox", "Scalar proximal operator of a penalty");
  prox_cmd->add_option("penalty", prox_args.penalty, "Penalty spec, e.g. lp:lambda=1,p=0.5")
      ->required();
  prox_cmd->add_option("b", prox_args.b, "Points b >= 0")->required();
  add_run_flags(prox_cmd, common);
  add_prox_flags(prox_cmd, common);

  GsvtArgs gsvt_args;
  auto* gsvt_cmd = app.add_subcommand("gsvt", "Generalized singular value thresholding");
  gsvt_cmd->add_option("args", gsvt_args.positional, "[penalty spec] matrix.csv")
      ->required()
      ->expected(1, 2);
  gsvt_cmd->add_option("--weights", gsvt_args.weights,
                       "Ascending weights for weighted SVT instead of a penalty")
      ->delimiter(',');
  add_run_flags(gsvt_cmd, common);
  add_prox_flags(gsvt_cmd, common);

  CompleteArgs complete_args;
  auto* complete_cmd = app.add_subcommand("complete", "Low rank matrix completion");
  complete_cmd->add_option("omega", complete_args.omega, "Observed entries CSV (row,col,value)")
      ->required();
  complete_cmd->add_option("--matrix", complete_args.matrix,
                           "Reference matrix CSV; sets the shape and enables rel_err");
  complete_cmd->add_option("--rows", complete_args.rows, "Rows when no --matrix is given");
  complete_cmd->add_option("--cols", complete_args.cols, "Columns when no --matrix is given");
  complete_cmd->add_option("--solver", complete_args.solver, "gpg, irnn or convex");
  add_run_flags(complete_cmd, common);
  add_solver_flags(complete_cmd, common);

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench-synthetic", "Synthetic recovery experiment");
  bench_cmd->add_option("--preset", bench_args.preset,
                        "noise-free, noise-free-small or noisy");
  bench_args.o_m = bench_cmd->add_option("--m", bench_args.m, "Rows");
  bench_args.o_n = bench_cmd->add_option("--n", bench_args.n, "Columns");
  bench_cmd->add_option("--ranks", bench_args.ranks, "Comma-separated ranks")->delimiter(',');
  bench_args.o_observe = bench_cmd->add_option("--observe", bench_args.observe,
                                               "Observed fraction");
  bench_args.o_noise = bench_cmd->add_option("--noise", bench_args.noise, "Noise level");
  bench_args.o_seeds = bench_cmd->add_option("--seeds", bench_args.seeds, "Trials per rank");
  bench_cmd->add_option("--solver", bench_args.solvers, "Comma-separated solvers")
      ->delimiter(',');
  bench_args.o_threshold = bench_cmd->add_option(
      "--success-threshold", bench_args.success_threshold, "RelErr counted as success");
  add_run_flags(bench_cmd, common);
  add_solver_flags(bench_cmd, common);

  InpaintArgs inpaint_args;
  auto* inpaint_cmd = app.add_subcommand("inpaint", "Complete an image with missing pixels");
  inpaint_cmd->add_option("image", inpaint_args.image, "PPM or PGM image")->required();
  inpaint_args.o_missing = inpaint_cmd->add_option("--missing", inpaint_args.missing,
                                                   "Fraction of pixels removed");
  inpaint_cmd->add_option("--solver", inpaint_args.solver, "gpg, irnn or convex");
  add_run_flags(inpaint_cmd, common);
  add_solver_flags(inpaint_cmd, common);

  MovieLensArgs ml_args;
  auto* ml_cmd = app.add_subcommand("movielens", "Collaborative filtering on u.data ratings");
  ml_cmd->add_option("ratings", ml_args.path, "u.data file")->required();
  ml_args.o_holdout = ml_cmd->add_option("--holdout", ml_args.holdout, "Test fraction");
  ml_cmd->add_option("--solver", ml_args.solver, "gpg, irnn or convex");
  ml_cmd->add_flag("--eval-train", ml_args.eval_train, "Score the training ratings");
  add_run_flags(ml_cmd, common);
  add_solver_flags(ml_cmd, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  for (const auto* sub : app.get_subcommands()) common.bind(sub);

  try {
    if (*prox_cmd) {
      inv.subcommand = "prox";
      cmd_prox(prox_args, inv, out);
    } else if (*gsvt_cmd) {
      inv.subcommand = "gsvt";
      gsvt_args.matrix = gsvt_args.positional.back();
      if (gsvt_args.positional.size() == 2) gsvt_args.penalty = gsvt_args.positional.front();
      if (gsvt_args.penalty.empty() == gsvt_args.weights.empty()) {
        throw DomainError("gsvt needs exactly one of a penalty spec or --weights");
      }
      cmd_gsvt(gsvt_args, inv, out);
    } else if (*complete_cmd) {
      inv.subcommand = "complete";
      cmd_complete(complete_args, inv, out);
    } else if (*bench_cmd) {
      inv.subcommand = "bench-synthetic";
      cmd_bench(bench_args, inv, out);
    } else if (*inpaint_cmd) {
      inv.subcommand = "inpaint";
      cmd_inpaint(inpaint_args, inv, out);
    } else if (*ml_cmd) {
      inv.subcommand = "movielens";
      cmd_movielens(ml_args, inv, out, err);
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}

}  // namespace gsvt::cli
