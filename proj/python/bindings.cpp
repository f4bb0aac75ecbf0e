// Copyright 2026 The spinlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "spinlab/circuit.hpp"
#include "spinlab/error.hpp"
#include "spinlab/experiment.hpp"
#include "spinlab/mitigation.hpp"
#include "spinlab/mps.hpp"
#include "spinlab/noise.hpp"
#include "spinlab/statevector.hpp"
#include "spinlab/trotter.hpp"

namespace py = pybind11;
using namespace spinlab;

namespace {

py::array_t<std::complex<double>> amplitudes(const StateVector& s) {
  const auto a = s.amplitudes();
  return py::array_t<std::complex<double>>(static_cast<py::ssize_t>(a.size()), a.data());
}

/// <M_st> after each Trotter step, closing gates applied to a copy.
std::vector<double> statevector_series(const Circuit& c, StateVector s) {
  std::vector<double> out;
  for (std::size_t k = 0; k < c.step_ends().size(); ++k) {
    apply(c.step_gates(k), s);
    StateVector m = s;
    apply(c.closing_gates(), m);
    out.push_back(staggered_magnetization(m));
  }
  return out;
}

std::vector<double> mps_series(const Circuit& c, int chi_max, double svd_cutoff) {
  MpsState m = mps_init_neel(c.n_qubits(), {chi_max, svd_cutoff});
  std::vector<double> out;
  for (std::size_t k = 0; k < c.step_ends().size(); ++k) {
    mps_apply(c.step_gates(k), m);
    MpsState mm = m;
    mps_apply(c.closing_gates(), mm);
    out.push_back(mps_staggered_magnetization(mm));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_spinlab, m) {
  m.doc() = "Trotterized Heisenberg chain circuits and simulators";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<SpecError>(m, "SpecError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
  py::register_exception<IndexError>(m, "IndexError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::enum_<Boundary>(m, "Boundary").value("OPEN", Boundary::Open).value("PERIODIC", Boundary::Periodic);
  py::enum_<TrotterOrder>(m, "TrotterOrder")
      .value("FIRST", TrotterOrder::First)
      .value("SECOND_MERGED", TrotterOrder::SecondMerged);

  py::class_<ChainSpec>(m, "ChainSpec")
      .def(py::init([](int n, Boundary b, double j1, double j2, double delta) {
             ChainSpec s{n, b, j1, j2, delta};
             s.validate();
             return s;
           }),
           py::arg("n_sites"), py::arg("boundary") = Boundary::Open, py::arg("j1") = 1.0, py::arg("j2") = 0.0,
           py::arg("delta") = 1.0)
      .def_readonly("n_sites", &ChainSpec::n_sites)
      .def_readonly("boundary", &ChainSpec::boundary)
      .def_readonly("j1", &ChainSpec::j1)
      .def_readonly("j2", &ChainSpec::j2)
      .def_readonly("delta", &ChainSpec::delta);

  py::class_<TrotterPlan>(m, "TrotterPlan")
      .def(py::init([](TrotterOrder o, int steps, double dt) {
             TrotterPlan p{o, steps, dt};
             p.validate();
             return p;
           }),
           py::arg("order") = TrotterOrder::First, py::arg("steps") = 1, py::arg("dt") = 0.1)
      .def_readonly("order", &TrotterPlan::order)
      .def_readonly("steps", &TrotterPlan::steps)
      .def_readonly("dt", &TrotterPlan::dt);

  py::class_<Circuit>(m, "Circuit")
      .def_property_readonly("n_qubits", &Circuit::n_qubits)
      .def_property_readonly("lowered", [](const Circuit& c) { return c.level() == CircuitLevel::Lowered; })
      .def_property_readonly("step_ends", &Circuit::step_ends)
      .def("__len__", &Circuit::size)
      .def("to_text", [](const Circuit& c) { return to_text(c); })
      .def_static("from_text", [](const std::string& s) { return from_text(s); })
      .def("unitary", [](const Circuit& c) { return Eigen::MatrixXcd(unitary_of(c)); });

  m.def("build", &build_trotter, py::arg("spec"), py::arg("plan"));
  m.def("lower", &lower, py::arg("circuit"));
  m.def("cnot_count", [](const Circuit& c) { return cnot_count(c); });
  m.def("depth", [](const Circuit& c) { return depth(c); });
  m.def(
      "depth_per_step",
      [](const ChainSpec& s, const TrotterPlan& p) {
        const StepDepth d = depth_per_step(s, p);
        return py::make_tuple(d.per_step, d.closing);
      },
      py::arg("spec"), py::arg("plan"));

  m.def("neel_amplitudes", [](int n) { return amplitudes(init_neel(n)); });
  m.def(
      "simulate",
      [](const Circuit& c) {
        StateVector s = init_neel(c.n_qubits());
        apply(c, s);
        return amplitudes(s);
      },
      "Final amplitudes from the Neel state.");
  m.def("statevector_series", [](const Circuit& c) { return statevector_series(c, init_neel(c.n_qubits())); });
  m.def("mps_series", &mps_series, py::arg("circuit"), py::arg("chi_max") = 256, py::arg("svd_cutoff") = 1e-12);
  m.def(
      "exact_series",
      [](const ChainSpec& spec, double dt, int steps) {
        const auto terms = hamiltonian_terms(spec);
        StateVector s = init_neel(spec.n_sites);
        std::vector<double> out;
        for (int k = 0; k < steps; ++k) {
          s = exact_evolve(terms, s, dt);
          out.push_back(staggered_magnetization(s));
        }
        return out;
      },
      py::arg("spec"), py::arg("dt"), py::arg("steps"));

  m.def("twirl_set", [] {
    std::vector<std::string> out;
    for (const auto& t : find_twirl_set()) {
      std::string s;
      for (Pauli p : t) s += to_string(p);
      out.push_back(s);
    }
    return out;
  });
  m.def("fold", &fold, py::arg("circuit"), py::arg("scale"));
  m.def("twirl", &twirl, py::arg("circuit"), py::arg("copies"), py::arg("seed"));
  m.def("zne_extrapolate", [](const std::vector<double>& v, const std::vector<double>& s) {
    return zne_extrapolate(v, s);
  });
  m.def(
      "m3_mitigate",
      [](const Counts& counts, const std::vector<std::pair<double, double>>& flips, int n) {
        std::vector<ReadoutError> r;
        for (const auto& [p01, p10] : flips) r.push_back({p01, p10});
        return m3_mitigate(counts, r, n);
      },
      py::arg("counts"), py::arg("flips"), py::arg("n_qubits"));

  m.def(
      "run_config",
      [](const std::string& text, std::optional<std::uint64_t> seed) {
        ExperimentConfig c = parse_config(text);
        if (seed) c.seed = *seed;
        const ResultSeries r = run_experiment(c);
        return py::make_tuple(to_csv(r), to_json(r));
      },
      py::arg("config_text"), py::arg("seed") = py::none(), "Runs an INI config; returns (csv, json) text.");
  m.def("tables", [] {
    const TablesReport r = emit_tables();
    return py::make_tuple(r.ok(), r.text);
  });
}
