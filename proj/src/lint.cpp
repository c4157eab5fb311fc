// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "costlab/lint.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <tuple>

namespace costlab {
namespace {

std::uint64_t next_multiple_of_4(std::uint64_t n) { return (n + 3) / 4 * 4; }

std::optional<double> aligned_gain(const std::optional<HardwareProfile>& profile, LayerClass cls,
                                   AlignmentClass current) {
  if (!profile) return std::nullopt;
  auto it = profile->gain.find(cls);
  if (it == profile->gain.end()) return std::nullopt;
  return it->second.div4 / it->second.at(current);
}

std::string gain_suffix(const std::optional<double>& gain) {
  return gain ? fmt::format(" (estimated {:.3f}x faster per operation)", *gain) : std::string{};
}

}  // namespace

std::string_view to_string(Severity s) { return s == Severity::warn ? "warn" : "info"; }

OptimizationConfig implied_config(const ModelSpec& model, const HardwareProfile& profile) {
  const bool quantized = model.weight_bits == 8;
  return OptimizationConfig{quantized, quantized, profile.has_fpu};
}

std::vector<Finding> lint_model(const ModelSpec& model,
                                const std::optional<HardwareProfile>& profile) {
  const auto shapes = infer_shapes(model);
  std::vector<Finding> findings;

  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const auto& layer = model.layers[i];
    const auto cls = layer_class(layer);
    if (!cls) continue;
    const auto index = static_cast<std::int64_t>(i);
    const auto driver = alignment_driver(layer, shapes[i]);
    const auto alignment = classify_alignment(driver);

    if (*cls == LayerClass::dense) {
      if (alignment == AlignmentClass::odd) {
        const auto gain = aligned_gain(profile, *cls, alignment);
        const auto target = next_multiple_of_4(driver);
        findings.push_back(
            {"R2", index, Severity::warn,
             fmt::format("dense input length {} is odd; widen the preceding layer to {}{}", driver,
                         target, gain_suffix(gain)),
             gain, target});
      }
    } else if (alignment != AlignmentClass::div4) {
      const auto gain = aligned_gain(profile, *cls, alignment);
      const auto target = next_multiple_of_4(driver);
      findings.push_back(
          {"R1", index, Severity::warn,
           fmt::format("{} has {} input channels (not divisible by 4); raise the preceding "
                       "layer's output to {} channels{}",
                       to_string(*cls), driver, target, gain_suffix(gain)),
           gain, target});
    }

    if (*cls == LayerClass::dw_conv2d) {
      std::string detail = "depthwise convolution has the highest latency per operation";
      if (profile && profile->delta_nc.contains(LayerClass::dw_conv2d)) {
        const double dw = profile->delta_nc.at(LayerClass::dw_conv2d);
        detail += fmt::format(" ({:.1f} ns/op on {}", dw, profile->name);
        if (profile->delta_nc.contains(LayerClass::conv2d)) {
          detail += fmt::format(", {:.1f}x conv2d", dw / profile->delta_nc.at(LayerClass::conv2d));
        }
        detail += ")";
      }
      detail += " and gains little from optimized kernels";
      findings.push_back({"R3", index, Severity::info, detail, std::nullopt, std::nullopt});
    }
  }

  if (profile) {
    if (model.weight_bits == 32 && !profile->has_fpu) {
      findings.push_back(
          {"R4", kModelLevel, Severity::warn,
           fmt::format("float weights on {} without FPU; quantize to 8 bit", profile->name),
           std::nullopt, std::nullopt});
    }
    const auto fit = fit_check(model, *profile, implied_config(model, *profile));
    if (!fit.fits) {
      std::string detail;
      if (fit.flash_needed > fit.flash_available) {
        detail += fmt::format("flash {} B needed, {} B available ({} B over)", fit.flash_needed,
                              fit.flash_available, fit.flash_needed - fit.flash_available);
      }
      if (fit.ram_needed > fit.ram_available) {
        if (!detail.empty()) detail += "; ";
        detail += fmt::format("RAM {} B needed, {} B available ({} B over)", fit.ram_needed,
                              fit.ram_available, fit.ram_needed - fit.ram_available);
      }
      findings.push_back({"R5", kModelLevel, Severity::warn,
                          fmt::format("oversized for {}: {}", profile->name, detail), std::nullopt,
                          std::nullopt});
    }
  }

  std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.layer_index, a.rule_id) < std::tie(b.layer_index, b.rule_id);
  });
  return findings;
}

}  // namespace costlab
