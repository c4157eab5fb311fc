// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "costlab/hwmodel.hpp"
#include "costlab/model.hpp"

namespace costlab {

enum class Severity { info, warn };

std::string_view to_string(Severity s);

/// Layer index used for findings about the whole model.
inline constexpr std::int64_t kModelLevel = -1;

struct Finding {
  std::string rule_id;
  std::int64_t layer_index = kModelLevel;
  Severity severity = Severity::info;
  std::string message;
  /// Per-layer latency gain of the aligned kernel; set only with a profile.
  std::optional<double> estimated_gain;
  /// Suggested value for the layer's alignment driver (R1/R2).
  std::optional<std::uint64_t> suggested;
};

/// Hardware-aware design checks:
///   R1  conv/depthwise input channels not divisible by 4
///   R2  dense input length odd
///   R3  depthwise convolution present (high latency per operation)
///   R4  float weights on a profile without FPU
///   R5  model does not fit the profile's flash/RAM
/// Findings are ordered by layer index (model-level first), then rule id.
std::vector<Finding> lint_model(const ModelSpec& model,
                                const std::optional<HardwareProfile>& profile = std::nullopt);

/// The configuration a model implies on `profile`: 8-bit weights run the
/// optimized kernels, anything else runs as float.
OptimizationConfig implied_config(const ModelSpec& model, const HardwareProfile& profile);

}  // namespace costlab
