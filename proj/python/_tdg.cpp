#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tdg/basis.hpp"
#include "tdg/driver.hpp"
#include "tdg/quadrature.hpp"
#include "tdg/special_functions.hpp"

namespace py = pybind11;

namespace {

py::dict record_dict(const tdg::IterationRecord& r) {
  py::dict d;
  d["iter"] = r.iter;
  d["n_elements"] = r.n_elements;
  d["dofs"] = r.dofs;
  d["rel_l2_error"] = r.rel_l2_error;
  d["estimate"] = r.estimate;
  d["eff_total"] = r.eff_total;
  d["eff_jump_u"] = r.eff_jump_u;
  d["eff_jump_gradu"] = r.eff_jump_gradu;
  d["eff_robin"] = r.eff_robin;
  d["cond"] = r.cond;
  d["residual"] = r.residual;
  d["wall_ms"] = r.wall_ms;
  d["h_refined"] = r.h_refined;
  d["p_refined"] = r.p_refined;
  d["closure"] = r.closure;
  d["frames_changed"] = r.frames_changed;
  return d;
}

py::list records_list(const std::vector<tdg::IterationRecord>& recs) {
  py::list out;
  for (const auto& r : recs) out.append(record_dict(r));
  return out;
}

tdg::ExperimentConfig load(const std::string& json) { return tdg::config_from_json(json); }

}  // namespace

PYBIND11_MODULE(_tdg, m) {
  m.doc() = "Plane-wave Trefftz DG Helmholtz solver";

  py::register_exception<tdg::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<tdg::SingularSystemError>(m, "SingularSystemError", PyExc_RuntimeError);
  py::register_exception<tdg::UnsupportedDegreeError>(m, "UnsupportedDegreeError", PyExc_ValueError);
  py::register_exception<tdg::DomainError>(m, "DomainError", PyExc_ValueError);

  m.def("default_config", [] { return tdg::config_to_json(tdg::ExperimentConfig{}); },
        "Default configuration as a JSON string.");
  m.def(
      "config_from_ini",
      [](const std::string& text, const std::optional<std::string>& base) {
        const tdg::ExperimentConfig b = base ? load(*base) : tdg::ExperimentConfig{};
        return tdg::config_to_json(tdg::parse_config_string(text, b));
      },
      py::arg("text"), py::arg("base") = py::none(),
      "Parse INI text (optionally over a base JSON config) into a JSON config.");
  m.def(
      "config_from_file",
      [](const std::string& path) { return tdg::config_to_json(tdg::parse_config_file(path)); },
      py::arg("path"));
  m.def(
      "preset",
      [](const std::string& name) {
        return tdg::config_to_json(tdg::parse_config_file(tdg::preset_path(name)));
      },
      py::arg("name"), "JSON config of a bundled preset.");
  m.def("config_hash", [](const std::string& json) { return tdg::config_hash(load(json)); });
  m.def("normalize_config", [](const std::string& json) { return tdg::config_to_json(load(json)); });

  m.def(
      "run_experiment",
      [](const std::string& json) {
        const tdg::ExperimentConfig c = load(json);
        tdg::RunResult run;
        {
          py::gil_scoped_release release;
          run = tdg::run_experiment(c);
        }
        py::dict out;
        out["records"] = records_list(run.records);
        out["stop_reason"] = run.stop_reason;
        out["solver_error"] = run.solver_error;
        out["residual_flagged"] = run.residual_flagged;
        return out;
      },
      py::arg("config"), "Adaptive loop; returns the iteration records.");
  m.def(
      "run_table2",
      [](const std::string& json) {
        const tdg::ExperimentConfig c = load(json);
        tdg::Table2Result t;
        {
          py::gil_scoped_release release;
          t = tdg::run_table2_protocol(c);
        }
        py::list rows;
        for (const auto& r : t.rows) {
          py::dict d;
          d["q"] = r.q;
          d["dofs"] = r.dofs;
          d["standard"] = r.standard;
          d["adaptive"] = r.adaptive;
          rows.append(d);
        }
        return rows;
      },
      py::arg("config"));
  m.def(
      "run_table3",
      [](const std::string& json) {
        const tdg::ExperimentConfig c = load(json);
        tdg::Table3Result t;
        {
          py::gil_scoped_release release;
          t = tdg::run_table3_protocol(c);
        }
        py::list rows;
        for (const auto& r : t.rows) {
          py::dict d;
          d["q"] = r.q;
          d["dofs"] = r.dofs;
          d["errors"] = r.errors;
          rows.append(d);
        }
        return rows;
      },
      py::arg("config"));
  m.def(
      "run_and_write",
      [](const std::string& json) {
        const tdg::ExperimentConfig c = load(json);
        std::string error;
        bool ok;
        {
          py::gil_scoped_release release;
          ok = tdg::run_and_write(c, &error);
        }
        if (!ok) throw tdg::SingularSystemError(error, -1);
        return c.out_dir;
      },
      py::arg("config"), "Runs the configured protocol and writes all artifacts.");
  m.def("convergence_csv", [](const std::string& json) {
    const tdg::ExperimentConfig c = load(json);
    return tdg::convergence_csv(tdg::run_experiment(c).records, c.record_timing);
  });

  m.def("bessel_j", &tdg::bessel_j, py::arg("nu"), py::arg("x"));
  m.def("bessel_y0", &tdg::bessel_y0, py::arg("x"));
  m.def("bessel_y1", &tdg::bessel_y1, py::arg("x"));
  m.def("hankel1_0", &tdg::hankel1_0, py::arg("x"));
  m.def("hankel1_1", &tdg::hankel1_1, py::arg("x"));

  m.def(
      "gauss_rule",
      [](int n) {
        const tdg::GaussRule& r = tdg::gauss_rule(n);
        return py::make_tuple(r.nodes, r.weights);
      },
      py::arg("n"), "Gauss-Legendre nodes and weights on [-1, 1].");
  m.def("rotation_to", &tdg::rotation_to, py::arg("d"));
  m.def(
      "canonical_directions",
      [](int p, int dim) { return tdg::canonical_directions(p, dim); }, py::arg("p"),
      py::arg("dim"));
  m.def("set_data_directory", &tdg::set_data_directory, py::arg("path"));
  m.def("data_directory", &tdg::data_directory);
}
