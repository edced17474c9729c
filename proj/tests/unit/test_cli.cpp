#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsvt/image.hpp"
#include "gsvt/matrix_io.hpp"
#include "gsvt/synthetic.hpp"
#include "gsvt_cli.hpp"
#include "oracles.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  json result() const { return json::parse(out); }
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = gsvt::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gsvt_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  f << s;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

double log_objective(double b, double x) {
  return oracle::penalty_value(gsvt::PenaltyFamily::Logarithm, 1, 1.5, 0, x) +
         0.5 * (x - b) * (x - b);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("prox examples") {
  const Run l1 = cli({"prox", "l1:lambda=1", "3"});
  REQUIRE(l1.code == 0);
  CHECK(l1.result()["minimizer"] == 2.0);
  CHECK(l1.result()["objective_at_zero"] == 4.5);
  CHECK(l1.result()["manifest"]["subcommand"] == "prox");

  const Run lp = cli({"prox", "lp:lambda=1,p=0.5", "0"});
  REQUIRE(lp.code == 0);
  CHECK(lp.result()["minimizer"] == 0.0);
}

TEST_CASE("logarithm sweep matches a brute-force table") {
  std::vector<std::string> args = {"prox", "logarithm:lambda=1,gamma=1.5"};
  std::vector<double> bs;
  for (int i = 0; i <= 40; ++i) {
    bs.push_back(0.25 * i);
    args.push_back(std::to_string(0.25 * i));
  }
  const Run r = cli(args);
  REQUIRE(r.code == 0);
  const json rows = r.result()["results"];
  REQUIRE(rows.size() == bs.size());
  for (std::size_t i = 0; i < bs.size(); ++i) {
    const double b = bs[i];
    double best = log_objective(b, 0.0);
    for (int k = 1; k <= 100000; ++k) best = std::min(best, log_objective(b, b * k / 100000.0));
    const double x = rows[i]["minimizer"];
    CHECK(rows[i]["b"] == b);
    CHECK(log_objective(b, x) <= best + 1e-8);
  }
}

TEST_CASE("usage errors exit 2") {
  CHECK(cli({}).code == 2);
  const Run bad = cli({"prox", "huber:lambda=1", "1"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("huber") != std::string::npos);
  CHECK(cli({"prox", "l1:lambda=1", "-1"}).code == 2);
  CHECK(cli({"prox", "l1:lambda=1", "x"}).code == 2);
  CHECK(cli({"bench-synthetic", "--lambda0", "3"}).code == 2);
  CHECK(cli({"bench-synthetic", "--preset", "nope"}).code == 2);
  CHECK(cli({"complete", "--solver", "gpg"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"prox", "--help"}).code == 0);
}

TEST_CASE("numerical failure exits 4") {
  const Run r = cli({"prox", "logarithm:lambda=1,gamma=1.5", "10", "--prox-max-iters", "1"});
  CHECK(r.code == 4);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("data errors exit 3") {
  const fs::path dir = scratch("data");
  write_file(dir / "bad.data", "1\t1\t5\t0\n2\t3\t4\t0\n2\tseven\t4\t0\n");
  const Run r = cli({"movielens", (dir / "bad.data").string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("line 3") != std::string::npos);
  CHECK(cli({"movielens", (dir / "missing.data").string()}).code == 3);
  CHECK(cli({"gsvt", "l1:lambda=1", (dir / "missing.csv").string()}).code == 3);
  write_file(dir / "img.ppm", "P6\n4 4\n255\nshort");
  CHECK(cli({"inpaint", (dir / "img.ppm").string()}).code == 3);
}

TEST_CASE("gsvt subcommand") {
  const fs::path dir = scratch("gsvt");
  write_file(dir / "b.csv", "3,0\n0,0.5\n");
  const Run r = cli({"gsvt", "l1:lambda=1", (dir / "b.csv").string(), "--out",
                     (dir / "o").string()});
  REQUIRE(r.code == 0);
  const json j = r.result();
  CHECK(j["shrunk_sigma"][0] == doctest::Approx(2.0));
  CHECK(j["shrunk_sigma"][1] == 0.0);
  CHECK(j["rank"] == 1);
  const gsvt::Matrix x = gsvt::read_matrix_csv(dir / "o" / "x.csv");
  CHECK(std::abs(x(0, 0) - 2.0) < 1e-14);
  CHECK(std::abs(x(1, 1)) < 1e-14);

  write_file(dir / "c.csv", "0.0941,0.4201\n0.5096,0.0089\n");
  CHECK(cli({"gsvt", (dir / "c.csv").string(), "--weights", "0.5,0.25"}).code == 2);
  CHECK(cli({"gsvt", (dir / "c.csv").string(), "--weights", "0.25,0.5"}).code == 0);
  CHECK(cli({"gsvt", "l1:lambda=1", (dir / "c.csv").string(), "--weights", "0.25,0.5"}).code ==
        2);
}

TEST_CASE("complete writes a per-iteration trace") {
  const fs::path dir = scratch("complete");
  gsvt::SyntheticSpec spec;
  spec.m = 30;
  spec.n = 25;
  spec.rank = 2;
  spec.seed = 4;
  const gsvt::SyntheticInstance inst = gen_lowrank(spec);
  gsvt::write_matrix_csv(dir / "m.csv", inst.truth);
  gsvt::write_entries_csv(dir / "omega.csv", inst.problem.entries());

  const Run r = cli({"complete", (dir / "omega.csv").string(), "--matrix",
                     (dir / "m.csv").string(), "--penalty", "logarithm:gamma=0.1", "--decay",
                     "0.97", "--max-iters", "600", "--out", (dir / "o").string()});
  REQUIRE(r.code == 0);
  const json j = r.result();
  CHECK(j["rel_err"].get<double>() < 1e-3);
  CHECK(j["observed"] == 375);

  std::istringstream trace(read_file(dir / "o" / "trace.jsonl"));
  std::string line;
  std::size_t k = 0;
  while (std::getline(trace, line)) {
    const json t = json::parse(line);
    CHECK(t["iteration"] == k);
    for (const char* key : {"lambda", "objective", "step_norm", "rel_err"}) CHECK(t.contains(key));
    ++k;
  }
  CHECK(k == j["iterations"].get<std::size_t>());
  CHECK(fs::exists(dir / "o" / "manifest.json"));
  CHECK(fs::exists(dir / "o" / "x.csv"));

  const Run shape = cli({"complete", (dir / "omega.csv").string(), "--rows", "30", "--cols",
                         "25", "--max-iters", "5"});
  REQUIRE(shape.code == 0);
  CHECK_FALSE(shape.result().contains("rel_err"));
  CHECK(cli({"complete", (dir / "omega.csv").string(), "--rows", "3", "--cols", "3"}).code == 2);
}

TEST_CASE("bench-synthetic single seed and replay") {
  const fs::path dir = scratch("bench");
  const std::vector<std::string> args = {"bench-synthetic", "--m",     "25",  "--n",
                                         "25",              "--ranks", "2,3", "--seeds",
                                         "1",               "--seed",  "7",   "--max-iters",
                                         "60",              "--out",   (dir / "a").string()};
  const Run a = cli(args);
  REQUIRE(a.code == 0);
  std::vector<std::string> again = args;
  again.back() = (dir / "b").string();
  again.insert(again.end() - 2, {"--jobs", "3"});
  const Run b = cli(again);
  REQUIRE(b.code == 0);

  const json agg = a.result()["aggregate"];
  REQUIRE(agg.size() == 2);
  std::istringstream csv(read_file(dir / "a" / "records.csv"));
  std::string header;
  std::getline(csv, header);
  CHECK(header.rfind("solver,rank,trial,data_seed,rel_err", 0) == 0);
  std::string row;
  std::size_t n = 0;
  while (std::getline(csv, row)) {
    std::vector<std::string> f;
    std::stringstream ss(row);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    REQUIRE(f.size() == 9);
    CHECK(std::stod(f[4]) == agg[n]["mean_rel_err"].get<double>());
    ++n;
  }
  CHECK(n == 2);
  CHECK(a.result()["aggregate"] == b.result()["aggregate"]);
  CHECK(a.result()["manifest"]["config"] == b.result()["manifest"]["config"]);
  CHECK(a.result()["manifest"]["seed"] == 7);
}

TEST_CASE("manifest records materialized defaults and input digests") {
  const fs::path dir = scratch("manifest");
  write_file(dir / "abc.csv", "abc");
  CHECK(gsvt::cli::sha256_file(dir / "abc.csv") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  write_file(dir / "b.csv", "1,2\n3,4\n");
  const Run r = cli({"gsvt", "mcp:lambda=1,gamma=2", (dir / "b.csv").string()});
  REQUIRE(r.code == 0);
  const json m = r.result()["manifest"];
  CHECK(m["subcommand"] == "gsvt");
  CHECK(m.contains("version"));
  CHECK(m["config"]["prox"].contains("max_iterations"));
  CHECK(m["inputs"][(dir / "b.csv").string()] == gsvt::cli::sha256_file(dir / "b.csv"));
}

TEST_CASE("inpaint subcommand") {
  const fs::path dir = scratch("inpaint");
  std::string pgm = "P5\n16 16\n255\n";
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) pgm.push_back(static_cast<char>((i * 7 + j * 5) % 256));
  write_file(dir / "g.pgm", pgm);

  const Run zero = cli({"inpaint", (dir / "g.pgm").string(), "--missing", "0", "--out",
                        (dir / "z").string()});
  REQUIRE(zero.code == 0);
  CHECK(zero.result()["psnr"] == "inf");
  CHECK(read_file(dir / "z" / "recovered.pgm") == gsvt::encode_pnm(gsvt::decode_pnm(pgm)));

  const Run a = cli({"inpaint", (dir / "g.pgm").string(), "--seed", "3"});
  const Run b = cli({"inpaint", (dir / "g.pgm").string(), "--seed", "3"});
  REQUIRE(a.code == 0);
  CHECK(a.result()["psnr"] == b.result()["psnr"]);
  CHECK(a.result()["observed_per_channel"] == 154);
}

TEST_CASE("movielens overfits the training ratings as lambda goes to zero") {
  const fs::path dir = scratch("movielens");
  std::mt19937_64 rng(5);
  const gsvt::Matrix u = oracle::random_matrix(rng, 30, 2);
  const gsvt::Matrix v = oracle::random_matrix(rng, 2, 20);
  const gsvt::Matrix r = u * v;
  std::ostringstream text;
  std::size_t written = 0;
  std::bernoulli_distribution keep(0.7);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 20; ++j) {
      if (!keep(rng) && i != 0 && j != 0) continue;
      const double rating = std::clamp(std::round(3.0 + r(i, j)), 1.0, 5.0);
      text << i + 1 << "\t" << j + 1 << "\t" << rating << "\t0\n";
      ++written;
    }
  }
  text << "1\t1\t4\t9\n";
  write_file(dir / "u.data", text.str());

  const Run fit = cli({"movielens", (dir / "u.data").string(), "--holdout", "0", "--eval-train",
                       "--lambda-target-factor", "1e-7", "--decay", "0.9", "--max-iters",
                       "800", "--tol", "1e-9"});
  REQUIRE(fit.code == 0);
  const json j = fit.result();
  CHECK(j["evaluated_on"] == "train");
  CHECK(j["test_size"] == 0);
  CHECK(j["train_size"] == written);
  CHECK(j["duplicates"] == 1);
  CHECK(fit.err.find("duplicate") != std::string::npos);
  CHECK(j["nmae"].get<double>() < 1e-3);

  const Run held = cli({"movielens", (dir / "u.data").string(), "--max-iters", "30"});
  REQUIRE(held.code == 0);
  CHECK(held.result()["evaluated_on"] == "test");
  CHECK(held.result()["test_size"] == std::llround(0.2 * written));
}

}
