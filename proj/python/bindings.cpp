#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symflow/darboux.hpp"
#include "symflow/energy_flow.hpp"
#include "symflow/oracles.hpp"
#include "symflow/suites.hpp"

namespace py = pybind11;
using namespace symflow;

namespace {

Subspace make_subspace(const Mat& basis, bool reorthonormalize) {
  if (basis.rows() == 0 || basis.rows() % 2 != 0)
    throw Error(ErrorKind::InvalidArgument, "basis needs an even, positive number of rows");
  const SpacePtr space = make_standard_space(static_cast<int>(basis.rows() / 2));
  return reorthonormalize ? subspace_from_spanning(space, basis) : Subspace(space, basis);
}

py::tuple sig_tuple(const TypeSignature& s) { return py::make_tuple(s.n0, s.nplus, s.nminus); }

TypeSignature sig_from(const std::tuple<int, int, int>& t) {
  return {std::get<0>(t), std::get<1>(t), std::get<2>(t)};
}

py::dict report_dict(const OracleReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["max_abs_error"] = r.max_abs_error;
  d["max_rel_error"] = r.max_rel_error;
  d["samples"] = r.samples;
  d["pass"] = r.pass;
  d["seed"] = r.seed;
  d["tolerance"] = r.tolerance;
  d["failures"] = r.failures;
  d["note"] = r.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_symflow, m) {
  m.doc() = "Energy flow on Grassmannians of a symplectic vector space";

  // Leaked on purpose: the class must outlive interpreter teardown.
  static auto* error_type = new py::exception<Error>(m, "SymflowError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const auto cls = py::reinterpret_borrow<py::object>(*error_type);
      py::object exc = cls(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(cls.ptr(), exc.ptr());
    }
  });

  py::class_<Subspace>(m, "Subspace")
      .def(py::init(&make_subspace), py::arg("basis"), py::arg("reorthonormalize") = false,
           "Subspace of R^2n from a 2n x k basis; orthonormal unless reorthonormalize is set.")
      .def_property_readonly("n", &Subspace::n)
      .def_property_readonly("k", &Subspace::k)
      .def_property_readonly("basis", &Subspace::basis)
      .def_property_readonly("projection", &Subspace::projection)
      .def("__repr__", [](const Subspace& w) {
        return "<Subspace n=" + std::to_string(w.n()) + " k=" + std::to_string(w.k()) + ">";
      });

  m.def("classify", [](const Subspace& w) { return sig_tuple(classify(w)); },
        "Type signature (n0, n+, n-).");
  m.def("kahler_spectrum", [](const Subspace& w) {
    const KahlerSpectrum s = kahler_spectrum(w);
    py::dict d;
    d["n0"] = s.n0;
    d["nJ"] = s.nJ;
    d["ntheta"] = s.ntheta;
    d["angles"] = s.angles;
    d["eigenvalues"] = s.eigenvalues;
    return d;
  });
  m.def("is_J_compatible", [](const Subspace& w) {
    const CompatibilityReport r = is_J_compatible(w);
    return py::make_tuple(r.compatible, r.residual);
  });
  m.def("symplectic_complement", &symplectic_complement);
  m.def("isotropic_kernel", [](const Subspace& w) { return isotropic_kernel(w); });
  m.def("max_complex_subspace", [](const Subspace& w) { return max_complex_subspace(w); });
  m.def("projection_distance", &projection_distance);
  m.def("all_signatures", [](int n) {
    py::list out;
    for (const TypeSignature& s : all_signatures(n)) out.append(sig_tuple(s));
    return out;
  });
  m.def("construct_subspace_of_type",
        [](int n, const std::tuple<int, int, int>& sig, bool randomized, std::uint64_t seed) {
          return construct_subspace_of_type(
              make_standard_space(n), sig_from(sig),
              randomized ? ConstructionMode::Randomized : ConstructionMode::Coordinate, seed);
        },
        py::arg("n"), py::arg("type"), py::arg("randomized") = false, py::arg("seed") = 0);
  m.def("worked_example_family", &worked_example_family, py::arg("t"));

  m.def("j_compatible_darboux", [](const Subspace& w) {
    const DarbouxBasis b = j_compatible_darboux(w);
    return py::make_tuple(b.e, b.f);
  });
  m.def("relative_darboux_basis", [](const Subspace& w) {
    const DarbouxBasis b = relative_darboux_basis(w, canonical_splitting(w));
    return py::make_tuple(b.e, b.f);
  }, "Darboux basis adapted to the canonical splitting of W.");

  m.def("energy", &energy);
  m.def("riemannian_gradient", [](const Subspace& w) { return riemannian_gradient(w).matrix; });
  m.def("symmetry_generator", [](const Subspace& w) { return symmetry_generator(w).matrix; });
  m.def("hessian_report", [](const Subspace& w) {
    const HessianReport r = hessian_report(w);
    py::dict d;
    d["eigenvalues"] = r.eigenvalues;
    d["kernel_dim"] = r.kernel_dim;
    d["expected_kernel_dim"] = r.expected_kernel_dim;
    return d;
  });
  m.def("energy_bounds", [](const std::tuple<int, int, int>& sig) {
    const EnergyBounds b = energy_bounds(sig_from(sig));
    return py::make_tuple(b.lower, b.upper, b.strict_upper);
  });
  m.def("stabilizer_dimension", [](const std::tuple<int, int, int>& sig) {
    return stabilizer_dimensions(sig_from(sig)).dim_total;
  });
  m.def("stabilizer_dimension_oracle", [](const Subspace& w) { return stabilizer_dimension_oracle(w); });

  m.def("flow",
        [](const Subspace& start, double step, double grad_tol, long max_steps, long record_every) {
          FlowConfig cfg;
          cfg.step = step;
          cfg.grad_tol = grad_tol;
          cfg.max_steps = max_steps;
          cfg.record_every = record_every;
          const FlowTrajectory t = flow_run(start, cfg);
          std::vector<double> times, energies, grads;
          std::vector<long> steps;
          for (const FlowSample& s : t.samples) {
            steps.push_back(s.step);
            times.push_back(s.t);
            energies.push_back(s.f);
            grads.push_back(s.grad_norm);
          }
          py::dict d;
          d["converged"] = t.converged;
          d["steps"] = t.steps;
          d["limit"] = t.limit;
          d["sample_steps"] = steps;
          d["t"] = times;
          d["f"] = energies;
          d["grad_norm"] = grads;
          d["type"] = sig_tuple(t.samples.front().type);
          d["limit_type"] = sig_tuple(t.samples.back().type);
          return d;
        },
        py::arg("start"), py::arg("step") = 0.1, py::arg("grad_tol") = 1e-10,
        py::arg("max_steps") = 100000, py::arg("record_every") = 1);

  m.def("suite_names", &suite_names);
  m.def("run_suite",
        [](const std::string& name, std::uint64_t seed, long samples) {
          SuiteOptions opts;
          opts.seed = seed;
          opts.samples = samples;
          py::list out;
          for (const OracleReport& r : run_suite(name, opts)) out.append(report_dict(r));
          return out;
        },
        py::arg("name"), py::arg("seed") = 0, py::arg("samples") = 0);
}
