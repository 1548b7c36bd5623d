#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rabistark/analytic.hpp"
#include "rabistark/colimit.hpp"
#include "rabistark/eigen.hpp"
#include "rabistark/errors.hpp"
#include "rabistark/fockspace.hpp"
#include "rabistark/model.hpp"
#include "rabistark/observables.hpp"
#include "rabistark/sweep.hpp"

namespace py = pybind11;
using namespace rabistark;

namespace {

ModelParams make_params(const std::string& model, double omega, double delta, double g, double u, double kappa) {
  ModelParams p;
  p.variant = parse_variant(model);
  p.omega = omega;
  p.delta = delta;
  p.g = g;
  p.u = u;
  p.kappa = kappa;
  p.validate();
  return p;
}

py::dict report_dict(const ConvergenceReport& r) {
  py::dict d;
  d["classification"] = std::string(to_string(r.classification));
  d["final_cutoff"] = r.final_cutoff;
  d["tolerance"] = r.tolerance;
  d["drift_rate"] = r.drift_rate;
  py::list history;
  for (const auto& h : r.history) history.append(py::make_tuple(h.cutoff, h.energies));
  d["history"] = history;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical and analytic spectra of the (completed) Rabi-Stark model";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());
  py::register_exception<RegimeError>(m, "RegimeError", base.ptr());
  py::register_exception<NoRootError>(m, "NoRootError", base.ptr());
  py::register_exception<ResolutionError>(m, "ResolutionError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init(&make_params), py::arg("model") = "stark", py::arg("omega") = 1.0, py::arg("delta") = 1.0,
           py::arg("g") = 0.0, py::arg("u") = 0.0, py::arg("kappa") = 0.0)
      .def_readwrite("omega", &ModelParams::omega)
      .def_readwrite("delta", &ModelParams::delta)
      .def_readwrite("g", &ModelParams::g)
      .def_readwrite("u", &ModelParams::u)
      .def_readwrite("kappa", &ModelParams::kappa)
      .def_property_readonly("model", [](const ModelParams& p) { return std::string(to_string(p.variant)); })
      .def("__repr__", &describe);

  m.def(
      "hamiltonian",
      [](const ModelParams& p, std::size_t cutoff) { return build_hamiltonian(p, cutoff).dense(); },
      py::arg("params"), py::arg("cutoff"),
      "Dense truncated Hamiltonian in the interleaved basis |n, s> -> 2n + (s == up).");

  m.def(
      "lowest_energies",
      [](const ModelParams& p, std::size_t cutoff, std::size_t k) {
        return eigen_symmetric(build_hamiltonian(p, cutoff), k, false).energies;
      },
      py::arg("params"), py::arg("cutoff"), py::arg("k"));

  m.def(
      "converged_spectrum",
      [](const ModelParams& p, std::size_t k, double tol, std::size_t max_cutoff) {
        const auto [s, r] = converged_spectrum(p, k, tol, max_cutoff);
        return py::make_tuple(s.energies, report_dict(r));
      },
      py::arg("params"), py::arg("k") = 10, py::arg("tol") = 1e-8, py::arg("max_cutoff") = std::size_t{1} << 19);

  m.def(
      "solve_lambda",
      [](const ModelParams& p, int n, int t_z, const std::string& mode) {
        LambdaMode lm = LambdaMode::Full;
        if (mode == "zero_order") lm = LambdaMode::ZeroOrder;
        else if (mode == "completed_full") lm = LambdaMode::CompletedFull;
        else if (mode == "co_limit") lm = LambdaMode::CoLimit;
        else if (mode != "full") throw ValidationError("mode must be full, zero_order, completed_full or co_limit");
        if (t_z != 1 && t_z != -1) throw ValidationError("t_z must be +1 or -1");
        return solve_lambda(p, n, t_z > 0 ? Tz::Plus : Tz::Minus, lm);
      },
      py::arg("params"), py::arg("n"), py::arg("t_z") = -1, py::arg("mode") = "full");

  m.def("analytic_ground_energy", &analytic_ground_energy, py::arg("params"));

  m.def(
      "analytic_levels",
      [](const ModelParams& p, int n_max) {
        py::list out;
        for (const auto& l : analytic_levels(analytic_spectrum(p, n_max)))
          out.append(py::make_tuple(l.energy, std::string(to_string(l.sign)), l.ladder));
        return out;
      },
      py::arg("params"), py::arg("n_max") = 20, "(energy, sign, ladder) tuples, ascending in energy.");

  m.def(
      "co_excitation_energy",
      [](const ModelParams& p) {
        const auto e = co_excitation_energy(p);
        return py::make_tuple(e.with_c, e.without_c);
      },
      py::arg("params"));
  m.def("co_branch_energy", [](const ModelParams& p, int n) { return co_branch_energy(p, n); }, py::arg("params"),
        py::arg("n"));
  m.def("crossing_ladder", [](const ModelParams& p, int n_max) { return crossing_ladder(p, n_max).positions; },
        py::arg("params"), py::arg("n_max"));
  m.def("analytic_mean_photon", &analytic_mean_photon, py::arg("n"), py::arg("lam"), py::arg("c1"), py::arg("c2"));
  m.def("slope_prediction", &slope_prediction, py::arg("params"));

  m.def(
      "mean_photon_ground",
      [](const ModelParams& p, double tol) { return mean_photon_ground(p, tol).value; }, py::arg("params"),
      py::arg("tol") = 1e-10);

  m.def(
      "staircase",
      [](const ModelParams& p, double start, double stop, double step, unsigned workers) {
        StaircaseOptions o;
        o.workers = workers;
        const auto r = staircase_scan(p, GridSpec{start, stop, step}, o);
        py::dict d;
        d["u"] = r.u_values;
        d["mean_photon"] = r.mean_photon;
        d["edges"] = r.edges;
        d["widths"] = r.widths;
        d["plateaus"] = r.plateaus;
        d["fitted_slope"] = r.fitted_slope;
        return d;
      },
      py::arg("params"), py::arg("start"), py::arg("stop"), py::arg("step"), py::arg("workers") = 0);
}
