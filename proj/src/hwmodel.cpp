// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "costlab/hwmodel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>

#include "costlab/error.hpp"
#include "overloaded.hpp"

namespace costlab {

using detail::Overloaded;

std::string_view to_string(AlignmentClass a) {
  switch (a) {
    case AlignmentClass::odd:
      return "odd";
    case AlignmentClass::even:
      return "even";
    case AlignmentClass::div4:
      return "div4";
  }
  return "odd";
}

std::string_view to_string(LayerClass c) {
  switch (c) {
    case LayerClass::dense:
      return "dense";
    case LayerClass::conv2d:
      return "conv2d";
    case LayerClass::conv2d_1x1:
      return "conv2d_1x1";
    case LayerClass::dw_conv2d:
      return "dw_conv2d";
  }
  return "dense";
}

std::optional<AlignmentClass> alignment_from_string(std::string_view s) {
  for (auto a : kAlignmentClasses) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

std::optional<LayerClass> layer_class_from_string(std::string_view s) {
  for (auto c : kLayerClasses) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

AlignmentClass classify_alignment(std::uint64_t n) {
  if (n % 4 == 0) return AlignmentClass::div4;
  if (n % 2 == 0) return AlignmentClass::even;
  return AlignmentClass::odd;
}

std::optional<LayerClass> layer_class(const LayerSpec& layer) {
  return std::visit(
      Overloaded{
          [](const Dense&) -> std::optional<LayerClass> { return LayerClass::dense; },
          [](const Conv2D& c) -> std::optional<LayerClass> {
            return c.kernel.x == 1 && c.kernel.y == 1 ? LayerClass::conv2d_1x1
                                                      : LayerClass::conv2d;
          },
          [](const DepthwiseConv2D&) -> std::optional<LayerClass> {
            return LayerClass::dw_conv2d;
          },
          [](const auto&) -> std::optional<LayerClass> { return std::nullopt; },
      },
      layer);
}

std::uint64_t alignment_driver(const LayerSpec& layer, const TensorShape& input) {
  if (std::holds_alternative<Dense>(layer)) return static_cast<std::uint64_t>(input.elements());
  if (is_compute(layer)) return static_cast<std::uint64_t>(input.channels);
  throw EstimateError(
      fmt::format("{} layer has no alignment driver (not a compute layer)", layer_type_name(layer)));
}

double GainRow::at(AlignmentClass a) const {
  return a == AlignmentClass::odd ? odd : a == AlignmentClass::even ? even : div4;
}

double& GainRow::at(AlignmentClass a) {
  return a == AlignmentClass::odd ? odd : a == AlignmentClass::even ? even : div4;
}

void validate(const HardwareProfile& p) {
  auto fail = [&](const std::string& what, const char* rule) {
    throw ValidationError(fmt::format("profile '{}': {}", p.name, what), std::nullopt, rule);
  };
  if (p.name.empty()) fail("name must not be empty", "name");
  if (!(p.clock_mhz > 0.0)) fail("clock_mhz must be positive", "clock_mhz > 0");
  if (!(p.avg_power_mw > 0.0)) fail("avg_power_mw must be positive", "avg_power_mw > 0");
  if (!(p.fpu_off_penalty >= 1.0)) fail("fpu_off_penalty must be >= 1", "fpu_off_penalty >= 1");
  if (!(p.float_vs_q_factor > 0.0)) fail("float_vs_q_factor must be positive", "float_vs_q > 0");
  for (const auto& [cls, delta] : p.delta_nc) {
    if (!(delta > 0.0)) fail(fmt::format("delta_nc[{}] must be positive", to_string(cls)), "delta > 0");
    auto it = p.gain.find(cls);
    if (it == p.gain.end()) fail(fmt::format("missing gains for {}", to_string(cls)), "gain present");
  }
  for (const auto& [cls, g] : p.gain) {
    if (!p.delta_nc.contains(cls)) {
      fail(fmt::format("gains for {} without delta_nc", to_string(cls)), "delta present");
    }
    if (!(g.odd >= 1.0 && g.even >= 1.0 && g.div4 >= 1.0)) {
      fail(fmt::format("gains for {} must be >= 1", to_string(cls)), "G >= 1");
    }
    if (!(g.odd <= g.even && g.even <= g.div4)) {
      fail(fmt::format("gains for {} must satisfy odd <= even <= div4", to_string(cls)),
           "G_odd <= G_even <= G_div4");
    }
  }
}

std::vector<HardwareProfile> builtin_profiles() {
  HardwareProfile l4;
  l4.name = "L4";
  l4.description = "STM32L496ZG (Cortex-M4F, NUCLEO-L496ZG); latency per op and gains measured";
  l4.clock_mhz = 80.0;
  l4.flash_bytes = 1024 * 1024;
  l4.ram_bytes = 320 * 1024;
  l4.has_fpu = true;
  l4.delta_nc = {{LayerClass::dense, 145.2},
                 {LayerClass::conv2d, 250.6},
                 {LayerClass::conv2d_1x1, 148.5},
                 {LayerClass::dw_conv2d, 925.1}};
  l4.gain = {{LayerClass::dense, {2.89, 3.13, 3.24}},
             {LayerClass::conv2d, {6.42, 6.96, 7.03}},
             {LayerClass::conv2d_1x1, {5.72, 6.33, 6.60}},
             {LayerClass::dw_conv2d, {2.17, 2.29, 2.32}}};
  l4.fpu_off_penalty = 4.0;
  // Matches the measured LeNet float-without-FPU vs. 8-bit optimized speedup
  // (12.9x) given the per-layer gains above.
  l4.float_vs_q_factor = 0.56;
  l4.avg_power_mw = 33.0;
  l4.code_size_bytes = 370 * 1024;
  l4.calibrated = false;

  // F4 and F7 scale the L4 latencies by the optimized LeNet latency ratio
  // (36.4 ms : 16.1 ms : 8.1 ms); gains are copied.
  auto scaled = [&](std::string name, std::string description, double ratio) {
    HardwareProfile p = l4;
    p.name = std::move(name);
    p.description = std::move(description);
    for (auto& [cls, delta] : p.delta_nc) delta *= ratio;
    return p;
  };
  auto f4 = scaled("F4",
                   "STM32F469NI (Cortex-M4F, DISCO-F469NI); latency scaled from L4", 16.1 / 36.4);
  f4.clock_mhz = 180.0;
  f4.flash_bytes = 2 * 1024 * 1024;
  f4.ram_bytes = 384 * 1024;
  f4.avg_power_mw = 330.0;
  auto f7 = scaled("F7", "STM32F767ZI (Cortex-M7, NUCLEO-F767ZI); latency scaled from L4",
                   8.1 / 36.4);
  f7.clock_mhz = 216.0;
  f7.flash_bytes = 2 * 1024 * 1024;
  f7.ram_bytes = 512 * 1024;
  f7.avg_power_mw = 400.0;
  return {l4, f4, f7};
}

HardwareProfile resolve_profile(std::string_view name_or_path,
                                const std::vector<std::filesystem::path>& search_dirs) {
  auto lower = [](std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
  };
  for (auto& p : builtin_profiles()) {
    if (lower(p.name) == lower(name_or_path)) return p;
  }
  for (const auto& dir : search_dirs) {
    const auto candidate = dir / (std::string(name_or_path) + ".json");
    if (std::filesystem::exists(candidate)) return load_profile(candidate);
  }
  const std::filesystem::path path{std::string(name_or_path)};
  if (std::filesystem::exists(path)) return load_profile(path);
  throw Error(fmt::format("unknown profile '{}'", name_or_path));
}

std::string OptimizationConfig::label() const {
  if (quantized) return cmsis ? "Q+CMSIS" : "Q";
  return fpu_enabled ? "U+FPU" : "U";
}

OptimizationConfig OptimizationConfig::from_label(std::string_view label) {
  if (label == "U") return {false, false, false};
  if (label == "U+FPU") return {false, false, true};
  if (label == "Q") return {true, false, true};
  if (label == "Q+CMSIS" || label == "O") return {true, true, true};
  throw Error(fmt::format("unknown optimization config '{}' (U, U+FPU, Q, Q+CMSIS)", label));
}

void validate(const OptimizationConfig& config) {
  if (config.cmsis && !config.quantized) {
    throw ValidationError("optimized kernels require quantization", std::nullopt,
                          "cmsis requires quantized");
  }
}

double effective_delta(const HardwareProfile& profile, LayerClass cls, AlignmentClass alignment,
                       const OptimizationConfig& config) {
  validate(config);
  auto it = profile.delta_nc.find(cls);
  if (it == profile.delta_nc.end()) {
    throw EstimateError(
        fmt::format("profile '{}' has no latency for layer class {}", profile.name, to_string(cls)));
  }
  const double base = it->second;
  if (config.quantized) {
    if (!config.cmsis) return base;
    auto g = profile.gain.find(cls);
    if (g == profile.gain.end()) {
      throw EstimateError(
          fmt::format("profile '{}' has no gains for layer class {}", profile.name, to_string(cls)));
    }
    return base / g->second.at(alignment);
  }
  const double with_fpu = base * profile.float_vs_q_factor;
  if (config.fpu_enabled && profile.has_fpu) return with_fpu;
  return with_fpu * profile.fpu_off_penalty;
}

Estimate estimate(const ModelSpec& model, const HardwareProfile& profile,
                  const OptimizationConfig& config) {
  validate(config);
  const auto shapes = infer_shapes(model);
  Estimate result;
  result.per_layer.reserve(model.layers.size());
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const auto& layer = model.layers[i];
    LayerEstimate le;
    le.layer_class = layer_class(layer);
    if (le.layer_class) {
      le.alignment = classify_alignment(alignment_driver(layer, shapes[i]));
      le.maccs = count_layer(layer, shapes[i]).maccs;
      le.delta_ns_per_op = effective_delta(profile, *le.layer_class, *le.alignment, config);
      le.latency_ms = static_cast<double>(le.maccs) * le.delta_ns_per_op * 1e-6;
      le.energy_mj = le.latency_ms * profile.avg_power_mw / 1000.0;
    }
    result.total_latency_ms += le.latency_ms;
    result.total_energy_mj += le.energy_mj;
    result.per_layer.push_back(le);
  }
  return result;
}

double speedup(const ModelSpec& model, const HardwareProfile& profile,
               const OptimizationConfig& a, const OptimizationConfig& b) {
  const double num = estimate(model, profile, a).total_latency_ms;
  const double den = estimate(model, profile, b).total_latency_ms;
  if (den == 0.0) throw EstimateError("speedup undefined: denominator latency is zero");
  return num / den;
}

FitReport fit_check(const ModelSpec& model, const HardwareProfile& profile,
                    const OptimizationConfig& config, std::uint64_t per_tensor_overhead_bytes) {
  validate(config);
  const int bits = config.quantized ? 8 : 32;
  const std::uint64_t act_bytes = config.quantized ? 1 : 4;

  FitReport report;
  report.flash_available = profile.flash_bytes;
  report.ram_available = profile.ram_bytes;
  report.flash_needed =
      footprint(model, bits, per_tensor_overhead_bytes).total_bytes() + profile.code_size_bytes;
  const auto shapes = infer_shapes(model);
  for (std::size_t i = 0; i + 1 < shapes.size(); ++i) {
    const auto pair = static_cast<std::uint64_t>(shapes[i].elements() + shapes[i + 1].elements());
    report.ram_needed = std::max(report.ram_needed, pair * act_bytes);
  }
  const bool flash_ok = report.flash_needed <= report.flash_available;
  const bool ram_ok = report.ram_needed <= report.ram_available;
  report.fits = flash_ok && ram_ok;
  if (!flash_ok && !ram_ok) {
    report.reason = "flash+ram";
  } else if (!flash_ok) {
    report.reason = "flash";
  } else if (!ram_ok) {
    report.reason = "ram";
  }
  return report;
}

}  // namespace costlab
