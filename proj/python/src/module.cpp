#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "gsvt/benchmarks.hpp"
#include "gsvt/errors.hpp"
#include "gsvt/metrics.hpp"
#include "gsvt/penalty_spec.hpp"
#include "gsvt/scalar_prox.hpp"
#include "gsvt/solvers.hpp"
#include "gsvt/spectral.hpp"
#include "gsvt/synthetic.hpp"
#include "gsvt/version.hpp"

namespace py = pybind11;
using namespace gsvt;

namespace {

using EntryArray = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

std::vector<ObservedEntry> to_entries(const EntryArray& a) {
  std::vector<ObservedEntry> e;
  e.reserve(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double r = a(i, 0);
    const double c = a(i, 1);
    if (r != std::floor(r) || c != std::floor(c)) {
      throw DomainError("entry indices must be integers");
    }
    e.push_back({static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c), a(i, 2)});
  }
  return e;
}

EntryArray from_entries(const std::vector<ObservedEntry>& e) {
  EntryArray a(static_cast<Eigen::Index>(e.size()), 3);
  for (std::size_t i = 0; i < e.size(); ++i) {
    a(static_cast<Eigen::Index>(i), 0) = static_cast<double>(e[i].row);
    a(static_cast<Eigen::Index>(i), 1) = static_cast<double>(e[i].col);
    a(static_cast<Eigen::Index>(i), 2) = e[i].value;
  }
  return a;
}

double extended(const ExtendedReal& v) {
  return v.is_finite() ? v.value() : std::numeric_limits<double>::infinity();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Generalized singular value thresholding and low rank completion";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_IOError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<Penalty>(m, "Penalty")
      .def(py::init([](const std::string& spec) { return parse_penalty_spec(spec); }),
           py::arg("spec"))
      .def_property_readonly("family",
                             [](const Penalty& p) { return std::string(family_name(p.family())); })
      .def_property_readonly("lam", &Penalty::lambda)
      .def_property_readonly("gamma", &Penalty::gamma)
      .def_property_readonly("p", &Penalty::p)
      .def("value", &Penalty::value, py::arg("theta"))
      .def("grad", &Penalty::grad, py::arg("theta"))
      .def("grad_at_zero", [](const Penalty& p) { return extended(p.grad_at_zero()); })
      .def("scaled", &Penalty::scaled, py::arg("factor"))
      .def("satisfies_assumption1", &Penalty::satisfies_assumption1)
      .def("__repr__", [](const Penalty& p) { return "Penalty('" + to_penalty_spec(p) + "')"; });

  m.def(
      "prox",
      [](const Penalty& pen, double b) {
        const ProxOutcome o = prox(pen, b);
        py::dict d;
        d["minimizer"] = o.minimizer;
        d["stationary_candidate"] =
            o.stationary_candidate ? py::object(py::float_(*o.stationary_candidate)) : py::none();
        d["objective_at_zero"] = o.objective_at_zero;
        d["objective_at_candidate"] = o.objective_at_candidate
                                          ? py::object(py::float_(*o.objective_at_candidate))
                                          : py::none();
        d["iterations"] = o.iterations;
        d["tie"] = o.tie;
        return d;
      },
      py::arg("penalty"), py::arg("b"));

  m.def("brute_force_prox", &brute_force_prox, py::arg("penalty"), py::arg("b"),
        py::arg("grid_step"));

  m.def(
      "gsvt",
      [](const Penalty& pen, const Matrix& b) {
        const GsvtResult r = gsvt::gsvt(pen, b);
        return py::make_tuple(r.x, r.input_sigma, r.shrunk_sigma);
      },
      py::arg("penalty"), py::arg("b"), "Returns (X, input singular values, shrunk ones).");

  m.def(
      "weighted_svt",
      [](const std::vector<double>& w, const Matrix& b) { return weighted_svt(w, b); },
      py::arg("weights"), py::arg("b"));

  m.def("singular_values", &singular_values, py::arg("b"));

  m.def(
      "gen_lowrank",
      [](Eigen::Index rows, Eigen::Index cols, Eigen::Index rank, double observe_fraction,
         double noise, std::uint64_t seed) {
        SyntheticSpec s;
        s.m = rows;
        s.n = cols;
        s.rank = rank;
        s.observe_fraction = observe_fraction;
        s.noise_sigma = noise;
        s.seed = seed;
        const SyntheticInstance inst = gen_lowrank(s);
        return py::make_tuple(inst.truth, from_entries(inst.problem.entries()));
      },
      py::arg("rows"), py::arg("cols"), py::arg("rank"), py::arg("observe_fraction") = 0.5,
      py::arg("noise") = 0.0, py::arg("seed") = 0,
      "Returns (M, entries) with entries an (n, 3) array of row, col, value.");

  m.def(
      "complete",
      [](Eigen::Index rows, Eigen::Index cols, const EntryArray& entries,
         const std::string& solver, const std::string& penalty, double lambda0_factor,
         double lambda_target_factor, double decay, std::size_t max_iterations,
         double tol, double mu) {
        const CompletionProblem problem(rows, cols, to_entries(entries));
        SolverConfig base;
        base.penalty = parse_penalty_spec(penalty);
        base.decay = decay;
        base.max_iterations = max_iterations;
        base.step_tolerance = tol;
        base.mu = mu;
        const SolverConfig cfg =
            with_schedule(base, problem, lambda0_factor, lambda_target_factor);
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve(parse_solver_kind(solver), problem, cfg);
        }
        py::dict trace;
        trace["objective"] = r.trace.objective;
        trace["step_norm"] = r.trace.step_norm;
        trace["lambda"] = r.trace.lambda;
        trace["iterations"] = r.trace.iterations;
        trace["converged"] = r.trace.converged;
        return py::make_tuple(r.x, trace);
      },
      py::arg("rows"), py::arg("cols"), py::arg("entries"), py::arg("solver") = "gpg",
      py::arg("penalty") = "logarithm:lambda=1,gamma=0.1", py::arg("lambda0_factor") = 0.9,
      py::arg("lambda_target_factor") = 1e-5, py::arg("decay") = 0.97,
      py::arg("max_iterations") = 600, py::arg("tol") = 1e-7, py::arg("mu") = 1.1,
      "Matrix completion; returns (X, trace dict).");

  m.def("rel_err", &rel_err, py::arg("x"), py::arg("truth"));
  m.def(
      "nmae",
      [](const Matrix& x, const EntryArray& eval) { return nmae(x, to_entries(eval)); },
      py::arg("x"), py::arg("entries"));
}
