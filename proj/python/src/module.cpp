#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dfsphoton/analytics.hpp"
#include "dfsphoton/photonics.hpp"
#include "dfsphoton/protocol.hpp"
#include "dfsphoton/report.hpp"
#include "dfsphoton/serialization.hpp"

namespace py = pybind11;
using namespace dfsphoton;

namespace {

ProtocolSettings make_settings(double raman_ratio, double omega_c, std::optional<double> delta_e, int k_max) {
  ProtocolSettings s;
  s.raman_ratio = raman_ratio;
  s.omega_c = omega_c;
  s.delta_e = delta_e;
  s.k_max = k_max;
  return s;
}

}  // namespace

// Structured results cross the boundary as JSON text; the package wrapper
// turns them into dicts.
PYBIND11_MODULE(_core, m) {
  m.doc() = "Compiled core of the dfsphoton package";

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init([](int n_atoms, double gamma_star) {
             PhysicalParams p;
             p.n_atoms = n_atoms;
             p.gamma_star = gamma_star;
             p.validate();
             return p;
           }),
           py::arg("n_atoms"), py::arg("gamma_star"))
      .def_static("from_purcell", &PhysicalParams::from_purcell, py::arg("n_atoms"), py::arg("purcell"))
      .def_readonly("n_atoms", &PhysicalParams::n_atoms)
      .def_readonly("gamma_star", &PhysicalParams::gamma_star)
      .def_readonly("gamma_1d", &PhysicalParams::gamma_1d)
      .def_property_readonly("purcell", &PhysicalParams::purcell)
      .def("__repr__", [](const PhysicalParams& p) {
        return "PhysicalParams(n_atoms=" + std::to_string(p.n_atoms) + ", purcell=" + format_number(p.purcell()) + ")";
      });

  py::class_<TargetSuperposition>(m, "TargetSuperposition")
      .def_static("fock", &TargetSuperposition::fock, py::arg("m"))
      .def_static("phi", &TargetSuperposition::phi, py::arg("m"))
      .def_static("normalized", &TargetSuperposition::normalized, py::arg("coefficients"))
      .def_property_readonly("coefficients", &TargetSuperposition::coefficients)
      .def_property_readonly("m_max", &TargetSuperposition::m_max);

  m.def(
      "_simulate_target",
      [](const TargetSuperposition& target, const PhysicalParams& params, double raman_ratio, double omega_c,
         std::optional<double> delta_e, int k_max) {
        return to_json(simulate_target(target, params, make_settings(raman_ratio, omega_c, delta_e, k_max))).dump();
      },
      py::arg("target"), py::arg("params"), py::arg("raman_ratio"), py::arg("omega_c"), py::arg("delta_e"),
      py::arg("k_max"));
  m.def(
      "_simulate_raman_step",
      [](int rung, const PhysicalParams& params, double raman_ratio, double omega_c, std::optional<double> delta_e,
         int k_max) {
        return to_json(simulate_raman_step(rung, params, make_settings(raman_ratio, omega_c, delta_e, k_max))).dump();
      },
      py::arg("m"), py::arg("params"), py::arg("raman_ratio"), py::arg("omega_c"), py::arg("delta_e"),
      py::arg("k_max"));
  m.def(
      "_plan_superposition",
      [](const TargetSuperposition& target, int n_atoms, double omega_r, double delta_e, double omega_c) {
        return to_json(plan_superposition(target, n_atoms, DriveSettings{omega_r, delta_e, omega_c})).dump();
      },
      py::arg("target"), py::arg("n_atoms"), py::arg("omega_r"), py::arg("delta_e"), py::arg("omega_c"));
  m.def(
      "_error_rates",
      [](int rung, int n_atoms, double omega_r, double delta_e, const PhysicalParams& params, bool post_selected) {
        const auto model = post_selected ? ErrorModel::kPostSelected : ErrorModel::kDeterministic;
        return to_json(error_rates(rung, n_atoms, omega_r, delta_e, params, model)).dump();
      },
      py::arg("m"), py::arg("n_atoms"), py::arg("omega_r"), py::arg("delta_e"), py::arg("params"),
      py::arg("post_selected"));
  m.def(
      "_total_infidelities",
      [](int m_max, const PhysicalParams& params) { return to_json(total_infidelities(m_max, params)).dump(); },
      py::arg("m_max"), py::arg("params"));
  m.def("_feasibility", [](int n_atoms) {
    const auto spec = WaveguideSpec::cs_sin();
    const auto purcell = purcell_ratio(spec);
    Json j;
    j["waveguide"] = to_json(spec);
    j["purcell"] = to_json(purcell);
    j["propagation"] = to_json(propagation_and_retardation(spec, n_atoms, purcell.ratio));
    return j.dump();
  });

  m.def("optimal_detuning",
        [](const PhysicalParams& params, bool post_selected, double cap) {
          return optimal_detuning(params, post_selected ? DetuningMode::kPostSelected : DetuningMode::kDeterministic,
                                  cap);
        },
        py::arg("params"), py::arg("post_selected") = false, py::arg("cap") = 0.3);
  m.def("effective_rabi",
        [](int rung, int n_atoms, Complex omega_r, double delta_e) {
          return effective_rabi(rung, n_atoms, omega_r, delta_e);
        },
        py::arg("m"), py::arg("n_atoms"), py::arg("omega_r"), py::arg("delta_e"));
  m.def("amplitude_exact",
        [](const std::vector<double>& detunings, int n_atoms, bool linearized) {
          return amplitude_exact(detunings, n_atoms, linearized);
        },
        py::arg("detunings"), py::arg("n_atoms"), py::arg("linearized") = false);
  m.def("amplitude_hp",
        [](const std::vector<double>& detunings, int n_atoms) { return amplitude_hp(detunings, n_atoms); },
        py::arg("detunings"), py::arg("n_atoms"));
  m.def("overlap_hp_closed",
        [](int photons, int n_atoms) {
          const auto c = overlap_hp_closed(photons, n_atoms);
          return py::make_tuple(c.overlap, c.one_minus);
        },
        py::arg("photons"), py::arg("n_atoms"), "Returns (overlap, 1 - overlap).");
  m.def("overlap_hp_numeric",
        [](int photons, int n_atoms) {
          return overlap_hp_numeric(photons, n_atoms, FrequencyGrid::default_for(photons, n_atoms)).value;
        },
        py::arg("photons"), py::arg("n_atoms"));
}
