// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include <cmath>
#include <map>
#include <tuple>

#include "costlab/error.hpp"
#include "costlab/measurelab.hpp"
#include "costlab/opcount.hpp"

namespace costlab {
namespace {

struct JoinedLayer {
  LayerClass cls;
  AlignmentClass alignment;
  std::uint64_t maccs;
};

// Per-layer class, alignment and MACCs, resolved once per model.
class ModelIndex {
 public:
  explicit ModelIndex(const ModelSpec& model) {
    const auto shapes = infer_shapes(model);
    layers_.reserve(model.layers.size());
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
      const auto& layer = model.layers[i];
      if (auto cls = layer_class(layer)) {
        layers_.push_back(JoinedLayer{*cls,
                                      classify_alignment(alignment_driver(layer, shapes[i])),
                                      count_layer(layer, shapes[i]).maccs});
      } else {
        layers_.push_back(std::nullopt);
      }
    }
  }

  const JoinedLayer& join(const MeasurementRecord& r) const {
    const auto index = *r.layer_index;
    if (index < 0 || static_cast<std::size_t>(index) >= layers_.size()) {
      throw Error(fmt::format("record for layer {} is out of range (model has {} layers)", index,
                              layers_.size()));
    }
    const auto& layer = layers_[static_cast<std::size_t>(index)];
    if (!layer) {
      throw Error(fmt::format("record for layer {} refers to a layer with zero MACCs", index));
    }
    if (r.layer_class && *r.layer_class != layer->cls) {
      throw Error(fmt::format("record for layer {} says {} but the model has {}", index,
                              to_string(*r.layer_class), to_string(layer->cls)));
    }
    return *layer;
  }

 private:
  std::vector<std::optional<JoinedLayer>> layers_;
};

// Least-squares slope through the origin of latency (ms) on MACCs, in ns/op.
struct OriginFit {
  double sxy = 0.0;
  double sxx = 0.0;
  std::size_t n = 0;

  void add(double maccs, double latency_ms) {
    sxy += maccs * latency_ms;
    sxx += maccs * maccs;
    ++n;
  }
  double delta_ns() const { return sxy / sxx * 1e6; }
};

}  // namespace

DeltaReport empirical_delta(std::span<const MeasurementRecord> records, const ModelSpec& model) {
  const ModelIndex index(model);
  DeltaReport report;
  using Key = std::tuple<std::string, std::string, LayerClass, AlignmentClass>;
  std::map<Key, DeltaGroup> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.is_total()) continue;
    const auto& layer = index.join(r);
    const double delta = r.latency_ms * 1e6 / static_cast<double>(layer.maccs);
    report.samples.push_back(DeltaSample{i, static_cast<std::size_t>(*r.layer_index), layer.cls,
                                         layer.alignment, layer.maccs, delta});

    auto& g = groups[Key{r.mcu, r.config.label(), layer.cls, layer.alignment}];
    if (g.n == 0) {
      g = DeltaGroup{r.mcu, r.config.label(), layer.cls, layer.alignment, 0, 0.0, delta, delta};
    }
    g.mean_delta_ns += delta;
    g.min_delta_ns = std::min(g.min_delta_ns, delta);
    g.max_delta_ns = std::max(g.max_delta_ns, delta);
    ++g.n;
  }
  for (auto& [key, g] : groups) {
    g.mean_delta_ns /= static_cast<double>(g.n);
    report.groups.push_back(g);
  }
  return report;
}

double predict_latency_ms(const MeasurementRecord& record, const ModelSpec& model,
                          const HardwareProfile& profile) {
  if (record.is_total()) throw Error("predict_latency_ms needs a layer-level record");
  const auto& layer = ModelIndex(model).join(record);
  return static_cast<double>(layer.maccs) *
         effective_delta(profile, layer.cls, layer.alignment, record.config) * 1e-6;
}

double prediction_mape(std::span<const MeasurementRecord> records, const ModelSpec& model,
                       const HardwareProfile& profile) {
  const ModelIndex index(model);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (r.is_total()) continue;
    const auto& layer = index.join(r);
    const double predicted = static_cast<double>(layer.maccs) *
                             effective_delta(profile, layer.cls, layer.alignment, r.config) * 1e-6;
    sum += std::abs(predicted - r.latency_ms) / r.latency_ms;
    ++n;
  }
  if (n == 0) throw Error("no layer-level records to score");
  return 100.0 * sum / static_cast<double>(n);
}

CalibrationResult calibrate(std::span<const MeasurementRecord> records, const ModelSpec& model,
                            const HardwareProfile& profile) {
  const ModelIndex index(model);
  std::map<LayerClass, OriginFit> plain;
  std::map<std::pair<LayerClass, AlignmentClass>, OriginFit> optimized;
  std::vector<double> latency;
  std::vector<double> energy;
  for (const auto& r : records) {
    latency.push_back(r.latency_ms);
    energy.push_back(r.energy_mj);
    if (r.is_total() || !r.config.quantized) continue;
    const auto& layer = index.join(r);
    const auto maccs = static_cast<double>(layer.maccs);
    if (r.config.cmsis) {
      optimized[{layer.cls, layer.alignment}].add(maccs, r.latency_ms);
    } else {
      plain[layer.cls].add(maccs, r.latency_ms);
    }
  }

  CalibrationResult result{profile, {}};
  auto& out = result.profile;
  auto& report = result.report;
  bool any_fitted = false;
  auto record_cell = [&](std::string name, bool fitted, std::size_t samples, double previous,
                         double value) {
    if (!fitted) report.unfit_cells.push_back(name);
    any_fitted = any_fitted || fitted;
    report.cells.push_back(CalibrationCell{std::move(name), fitted, samples, previous, value});
  };

  for (auto cls : kLayerClasses) {
    const auto name = fmt::format("delta_nc.{}", to_string(cls));
    const auto prev_it = profile.delta_nc.find(cls);
    const double previous = prev_it != profile.delta_nc.end() ? prev_it->second : 0.0;
    auto it = plain.find(cls);
    if (it != plain.end()) {
      out.delta_nc[cls] = it->second.delta_ns();
      if (!out.gain.contains(cls)) out.gain[cls] = GainRow{};
      record_cell(name, true, it->second.n, previous, out.delta_nc[cls]);
    } else {
      record_cell(name, false, 0, previous, previous);
    }
  }
  for (auto cls : kLayerClasses) {
    for (auto a : kAlignmentClasses) {
      const auto name = fmt::format("gain.{}.{}", to_string(cls), to_string(a));
      const auto gain_it = profile.gain.find(cls);
      const double previous = gain_it != profile.gain.end() ? gain_it->second.at(a) : 0.0;
      auto it = optimized.find({cls, a});
      if (it != optimized.end() && out.delta_nc.contains(cls)) {
        const double g = out.delta_nc.at(cls) / it->second.delta_ns();
        out.gain[cls].at(a) = g;
        record_cell(name, true, it->second.n, previous, g);
      } else {
        record_cell(name, false, it != optimized.end() ? it->second.n : 0, previous, previous);
      }
    }
  }

  bool power_ok = false;
  if (latency.size() >= 2) {
    try {
      auto fit = fit_line(latency, energy);
      if (fit.slope > 0.0) {
        report.power_fit = fit;
        power_ok = true;
      }
    } catch (const DegenerateFitError&) {
    }
  }
  if (power_ok) {
    out.avg_power_mw = report.power_fit->slope * 1000.0;
    record_cell("avg_power_mw", true, report.power_fit->n, profile.avg_power_mw, out.avg_power_mw);
  } else {
    record_cell("avg_power_mw", false, latency.size(), profile.avg_power_mw, profile.avg_power_mw);
  }

  if (!any_fitted) {
    throw CoverageError(
        fmt::format("calibration data covers no cell ({} missing)", report.unfit_cells.size()),
        report.unfit_cells);
  }
  out.calibrated = true;
  validate(out);

  bool has_layers = false;
  for (const auto& r : records) has_layers = has_layers || !r.is_total();
  if (has_layers) report.mape_percent = prediction_mape(records, model, out);
  return result;
}

}  // namespace costlab
