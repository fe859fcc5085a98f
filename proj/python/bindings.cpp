#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "schurdil/dilation.hpp"
#include "schurdil/errors.hpp"
#include "schurdil/examples.hpp"
#include "schurdil/factorization_search.hpp"
#include "schurdil/schur_multiplier.hpp"
#include "schurdil/trace_representation.hpp"

namespace py = pybind11;
using namespace schurdil;

namespace {

std::vector<AlgebraElement> elements_from(const TracialAlgebra& alg,
                                          const std::vector<std::vector<CMatrix>>& d) {
  std::vector<AlgebraElement> out;
  out.reserve(d.size());
  for (const auto& blocks : d) out.emplace_back(alg, blocks);
  return out;
}

std::vector<std::vector<CMatrix>> blocks_of(const TraceRepresentation& rep) {
  std::vector<std::vector<CMatrix>> out;
  for (const auto& d : rep.unitaries()) out.push_back(d.blocks());
  return out;
}

py::dict report_dict(const DilationReport& r) {
  py::list per_k;
  for (const auto& k : r.per_k) {
    py::dict e;
    e["k"] = k.k;
    e["max_residual"] = k.max_residual;
    e["pass"] = k.pass;
    e["within_window"] = k.within_window;
    per_k.append(e);
  }
  py::dict d;
  d["per_k"] = per_k;
  d["max_residual"] = r.max_residual;
  d["pass"] = r.pass;
  d["observables"] = r.observables;
  return d;
}

}  // namespace

PYBIND11_MODULE(_schurdil, m) {
  m.doc() = "Trace-form Schur multipliers and their finite-window dilations";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", validation.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<TracialAlgebra>(m, "Algebra")
      .def(py::init<std::vector<int>, std::vector<double>>(), py::arg("blocks"),
           py::arg("weights"))
      .def_static("uniform", &TracialAlgebra::with_uniform_trace, py::arg("blocks"))
      .def_static("parse", &parse_algebra_spec, py::arg("spec"))
      .def_property_readonly("blocks", &TracialAlgebra::blocks)
      .def_property_readonly("weights", &TracialAlgebra::weights)
      .def_property_readonly("embedding_dim", &TracialAlgebra::embedding_dim)
      .def("__repr__", [](const TracialAlgebra& a) {
        return "Algebra('" + format_algebra_spec(a) + "')";
      });

  py::class_<TraceRepresentation>(m, "Representation")
      .def(py::init([](const TracialAlgebra& alg, const std::vector<std::vector<CMatrix>>& d) {
             return TraceRepresentation(alg, elements_from(alg, d));
           }),
           py::arg("algebra"), py::arg("unitaries"))
      .def_property_readonly("algebra", &TraceRepresentation::algebra)
      .def_property_readonly("n", &TraceRepresentation::n)
      .def_property_readonly("unitaries", &blocks_of)
      .def("embedded", [](const TraceRepresentation& r, int i) {
        return CMatrix(embed(r.unitary(static_cast<std::size_t>(i))));
      }, py::arg("i"))
      .def("multiplier", [](const TraceRepresentation& r) { return build_multiplier(r).table(); })
      .def("gauge_normalize", &gauge_normalize)
      .def("validate", [](const TraceRepresentation& r, double tol) {
        const auto v = validate(r, tol);
        py::dict d;
        d["valid"] = v.valid;
        d["unitarity_residuals"] = v.unitarity_residuals;
        d["failing_indices"] = v.failing_indices;
        d["normalization_residual"] = v.normalization_residual;
        return d;
      }, py::arg("tol") = kUnitarityTol);

  m.def("omega_representation", &omega_representation, py::arg("omega"));
  m.def("planted_representation", &planted_representation, py::arg("n"), py::arg("algebra"),
        py::arg("seed"));

  m.def("schur_apply", [](const CMatrix& table, const CMatrix& a) {
    return schur_apply(SchurMultiplier(table), a);
  }, py::arg("m"), py::arg("a"));
  m.def("cp_check", [](const CMatrix& table, double tol) {
    const auto r = cp_check(SchurMultiplier(table), tol);
    py::dict d;
    d["positive"] = r.positive;
    d["witness"] = r.witness;
    d["min_eigenvalue"] = r.min_eigenvalue;
    d["diagnostic"] = r.diagnostic;
    return d;
  }, py::arg("m"), py::arg("tol") = kDefaultPsdTol);
  m.def("norm_bounds", [](const CMatrix& table) {
    const auto r = norm_bounds(SchurMultiplier(table));
    return py::make_tuple(r.lower, r.upper);
  }, py::arg("m"), "Lower and upper bounds on the multiplier norm.");

  m.def("search", [](const CMatrix& table, const TracialAlgebra& alg, int restarts,
                     std::uint64_t seed, double target, int max_iters) {
    SearchConfig cfg;
    cfg.algebra = alg;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.target_residual = target;
    cfg.max_iters = max_iters;
    SearchResult r = [&] {
      py::gil_scoped_release release;
      return search(SchurMultiplier(table), cfg);
    }();
    py::dict d;
    d["rep"] = r.best_rep;
    d["residual"] = r.residual;
    d["converged"] = r.converged;
    d["best_restart"] = r.best_restart;
    d["restart_residuals"] = r.restart_residuals;
    return d;
  }, py::arg("m"), py::arg("algebra"), py::arg("restarts") = 8, py::arg("seed") = 42,
        py::arg("target") = 1e-8, py::arg("max_iters") = 500);

  py::class_<DilationSystem>(m, "Dilation")
      .def(py::init([](const TraceRepresentation& rep, int window, Eigen::Index dim_cap) {
             return DilationSystem::build(rep, window, dim_cap);
           }),
           py::arg("rep"), py::arg("K"), py::arg("dim_cap") = kDefaultDimCap)
      .def_property_readonly("n", &DilationSystem::n)
      .def_property_readonly("K", &DilationSystem::window)
      .def_property_readonly("dim", &DilationSystem::dim)
      .def_property_readonly("unitary", &DilationSystem::implementing_unitary)
      .def("embed", &DilationSystem::embed_J, py::arg("z"))
      .def("step", &DilationSystem::step, py::arg("y"), py::arg("k") = 1)
      .def("expectation", [](const DilationSystem& s, const CMatrix& y) { return s.expectation(y); },
           py::arg("y"))
      .def("verify", [](const DilationSystem& s, int kmax, double tol, int samples,
                        std::uint64_t seed, bool beyond) {
        VerifyOptions o;
        o.random_samples = samples;
        o.seed = seed;
        o.allow_beyond_window = beyond;
        return report_dict(verify_dilation(s, kmax, tol, o));
      }, py::arg("kmax"), py::arg("tol") = 1e-10, py::arg("samples") = 10, py::arg("seed") = 1,
           py::arg("beyond_window") = false)
      .def("invariants", [](const DilationSystem& s, int samples, std::uint64_t seed) {
        const auto r = check_invariants(s, samples, seed);
        py::dict d;
        d["unitarity"] = r.unitarity;
        d["membership"] = r.membership;
        d["multiplicativity"] = r.multiplicativity;
        d["star"] = r.star;
        d["unitality"] = r.unitality;
        d["trace"] = r.trace;
        return d;
      }, py::arg("samples") = 10, py::arg("seed") = 1)
      .def("pairing", &ambient_pairing, py::arg("k"), py::arg("u"), py::arg("v"), py::arg("a"),
           py::arg("b"));

  m.def("pairing_closed_form", &pairing_closed_form, py::arg("rep"), py::arg("k"), py::arg("u"),
        py::arg("v"), py::arg("a"), py::arg("b"));
}
