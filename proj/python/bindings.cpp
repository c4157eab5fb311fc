// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "costlab/error.hpp"
#include "costlab/hwmodel.hpp"
#include "costlab/lint.hpp"
#include "costlab/measurelab.hpp"
#include "costlab/model.hpp"
#include "costlab/opcount.hpp"
#include "costlab/sweepgen.hpp"

namespace py = pybind11;
using namespace costlab;

namespace {

py::dict count_dict(const OpCount& c) {
  py::dict d;
  d["flops"] = c.flops;
  d["maccs"] = c.maccs;
  d["params"] = c.params;
  return d;
}

py::tuple shape_tuple(const TensorShape& s) { return py::make_tuple(s.height, s.width, s.channels); }

OptimizationConfig config_of(const std::string& label, std::optional<bool> fpu) {
  auto c = OptimizationConfig::from_label(label);
  if (fpu && !c.quantized) c.fpu_enabled = *fpu;
  return c;
}

py::dict estimate_dict(const Estimate& e) {
  py::list layers;
  for (const auto& le : e.per_layer) {
    py::dict d;
    d["layer_class"] = le.layer_class ? py::cast(std::string(to_string(*le.layer_class))) : py::none();
    d["alignment"] = le.alignment ? py::cast(std::string(to_string(*le.alignment))) : py::none();
    d["maccs"] = le.maccs;
    d["delta_ns_per_op"] = le.delta_ns_per_op;
    d["latency_ms"] = le.latency_ms;
    d["energy_mj"] = le.energy_mj;
    layers.append(d);
  }
  py::dict d;
  d["per_layer"] = layers;
  d["total_latency_ms"] = e.total_latency_ms;
  d["total_energy_mj"] = e.total_energy_mj;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Static cost analysis of neural networks for microcontrollers";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<EstimateError>(m, "EstimateError", error.ptr());
  py::register_exception<DegenerateFitError>(m, "DegenerateFitError", error.ptr());
  py::register_exception<CoverageError>(m, "CoverageError", error.ptr());

  py::class_<ModelSpec>(m, "Model")
      .def_readonly("name", &ModelSpec::name)
      .def_readonly("weight_bits", &ModelSpec::weight_bits)
      .def_readonly("metadata", &ModelSpec::metadata)
      .def_property_readonly("input", [](const ModelSpec& s) { return shape_tuple(s.input); })
      .def_property_readonly("layer_types",
                             [](const ModelSpec& s) {
                               std::vector<std::string> types;
                               for (const auto& l : s.layers) types.emplace_back(layer_type_name(l));
                               return types;
                             })
      .def("shapes",
           [](const ModelSpec& s) {
             py::list out;
             for (const auto& shape : infer_shapes(s)) out.append(shape_tuple(shape));
             return out;
           })
      .def("to_json", &serialize_model)
      .def("__len__", [](const ModelSpec& s) { return s.layers.size(); })
      .def("__eq__", [](const ModelSpec& a, const ModelSpec& b) { return a == b; })
      .def("__repr__", [](const ModelSpec& s) {
        return "<Model " + s.name + " (" + std::to_string(s.layers.size()) + " layers)>";
      });

  py::class_<HardwareProfile>(m, "Profile")
      .def_readonly("name", &HardwareProfile::name)
      .def_readonly("clock_mhz", &HardwareProfile::clock_mhz)
      .def_readonly("flash_bytes", &HardwareProfile::flash_bytes)
      .def_readonly("ram_bytes", &HardwareProfile::ram_bytes)
      .def_readonly("has_fpu", &HardwareProfile::has_fpu)
      .def_readonly("avg_power_mw", &HardwareProfile::avg_power_mw)
      .def_readonly("calibrated", &HardwareProfile::calibrated)
      .def("to_json", &serialize_profile)
      .def("__repr__", [](const HardwareProfile& p) { return "<Profile " + p.name + ">"; });

  m.def("parse_model", &parse_model, py::arg("text"));
  m.def("load_model", [](const std::string& path) { return load_model(path); }, py::arg("path"));
  m.def("fixtures", [] {
    auto f = fixtures();
    py::dict d;
    d["lenet"] = f.lenet;
    d["resnet20"] = f.resnet20;
    return d;
  });

  m.def(
      "count_model",
      [](const ModelSpec& model) {
        const auto c = count_model(model);
        py::list layers;
        for (const auto& l : c.per_layer) layers.append(count_dict(l));
        py::dict d;
        d["per_layer"] = layers;
        d["total"] = count_dict(c.total);
        return d;
      },
      py::arg("model"));
  m.def(
      "footprint",
      [](const ModelSpec& model, int bits, std::uint64_t overhead) {
        const auto f = footprint(model, bits, overhead);
        py::dict d;
        d["weight_bytes"] = f.weight_bytes;
        d["bias_bytes"] = f.bias_bytes;
        d["overhead_bytes"] = f.overhead_bytes;
        d["total_bytes"] = f.total_bytes();
        d["total_kib"] = f.total_kib();
        return d;
      },
      py::arg("model"), py::arg("weight_bits") = 32,
      py::arg("overhead") = kDefaultTensorOverheadBytes);

  m.def("builtin_profiles", &builtin_profiles);
  m.def(
      "resolve_profile",
      [](const std::string& name, const std::vector<std::string>& dirs) {
        return resolve_profile(name, {dirs.begin(), dirs.end()});
      },
      py::arg("name_or_path"), py::arg("search_dirs") = std::vector<std::string>{});

  m.def(
      "estimate",
      [](const ModelSpec& model, const HardwareProfile& profile, const std::string& config,
         std::optional<bool> fpu) {
        return estimate_dict(estimate(model, profile, config_of(config, fpu)));
      },
      py::arg("model"), py::arg("profile"), py::arg("config") = "Q+CMSIS",
      py::arg("fpu") = py::none(),
      "Per-layer and total latency/energy. `config` is U, U+FPU, Q or Q+CMSIS.");
  m.def(
      "speedup",
      [](const ModelSpec& model, const HardwareProfile& profile, const std::string& a,
         const std::string& b) {
        return speedup(model, profile, config_of(a, std::nullopt), config_of(b, std::nullopt));
      },
      py::arg("model"), py::arg("profile"), py::arg("config_a"), py::arg("config_b"));
  m.def(
      "fit_check",
      [](const ModelSpec& model, const HardwareProfile& profile, const std::string& config) {
        const auto r = fit_check(model, profile, config_of(config, std::nullopt));
        py::dict d;
        d["fits"] = r.fits;
        d["flash_needed"] = r.flash_needed;
        d["flash_available"] = r.flash_available;
        d["ram_needed"] = r.ram_needed;
        d["ram_available"] = r.ram_available;
        d["reason"] = r.reason;
        return d;
      },
      py::arg("model"), py::arg("profile"), py::arg("config") = "Q+CMSIS");

  m.def(
      "pareto_front",
      [](const std::vector<std::tuple<std::string, double, double>>& points) {
        std::vector<ParetoPoint> pts;
        for (const auto& [label, lat, en] : points) pts.push_back({label, lat, en});
        std::vector<std::tuple<std::string, double, double>> out;
        for (const auto& p : pareto_front(pts)) out.emplace_back(p.label, p.latency_ms, p.energy_mj);
        return out;
      },
      py::arg("points"), "Non-dominated (label, latency_ms, energy_mj) tuples.");
  m.def(
      "fit_line",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        const auto f = fit_line(x, y);
        py::dict d;
        d["slope"] = f.slope;
        d["intercept"] = f.intercept;
        d["pearson_r"] = f.pearson_r;
        d["n"] = f.n;
        d["degenerate"] = f.degenerate;
        return d;
      },
      py::arg("x"), py::arg("y"));

  m.def(
      "lint_model",
      [](const ModelSpec& model, std::optional<HardwareProfile> profile) {
        py::list out;
        for (const auto& f : lint_model(model, profile)) {
          py::dict d;
          d["rule_id"] = f.rule_id;
          d["layer_index"] = f.layer_index;
          d["severity"] = std::string(to_string(f.severity));
          d["message"] = f.message;
          d["estimated_gain"] = f.estimated_gain;
          d["suggested"] = f.suggested;
          out.append(d);
        }
        return out;
      },
      py::arg("model"), py::arg("profile") = py::none());

  m.def(
      "generate",
      [](const std::string& family, std::int64_t from, std::int64_t to, std::int64_t step) {
        const auto f = sweep_family_from_string(family);
        if (!f) throw Error("unknown sweep family '" + family + "'");
        py::list out;
        for (const auto& e : generate({*f, from, to, step, std::nullopt})) {
          py::dict d;
          d["y"] = e.y;
          d["maccs"] = e.maccs;
          d["alignment"] = std::string(to_string(e.alignment));
          d["model"] = e.model;
          out.append(d);
        }
        return out;
      },
      py::arg("family"), py::arg("start"), py::arg("stop"), py::arg("step") = 1);
}
