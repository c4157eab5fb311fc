// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "costlab/hwmodel.hpp"
#include "costlab/model.hpp"

namespace costlab {

enum class SweepFamily { dense, conv_filters, dwconv_channels };

std::string_view to_string(SweepFamily family);
std::optional<SweepFamily> sweep_family_from_string(std::string_view s);

/// The hyper-parameter a sweep rewrites.
enum class SlotField {
  units,           ///< Dense::units of `layer`
  filters,         ///< Conv2D::filters of `layer`
  input_channels,  ///< ModelSpec::input.channels (`layer` unused)
};

struct SweepSlot {
  SlotField field = SlotField::units;
  std::size_t layer = 0;
};

/// A model with one marked slot and the index of the layer being benchmarked.
struct SweepTemplate {
  ModelSpec base;
  SweepSlot slot;
  std::size_t benchmarked_layer = 0;
};

struct SweepSpec {
  SweepFamily family = SweepFamily::conv_filters;
  std::int64_t from = 1;
  std::int64_t to = 1;
  std::int64_t step = 1;
  /// Defaults to `default_template(family)`.
  std::optional<SweepTemplate> base;
};

struct SweepEntry {
  std::int64_t y = 0;
  ModelSpec model;
  std::uint64_t maccs = 0;  ///< of the benchmarked layer
  AlignmentClass alignment = AlignmentClass::odd;
};

/// Single-purpose benchmarking network for one family:
///   dense:           1x1x8 -> Dense(Y) -> Dense(64)* -> Flatten -> Dense(10)
///   conv_filters:    16x16x3 -> Conv3x3(Y) -> Conv3x3(16)* -> Flatten -> Dense(10)
///   dwconv_channels: 16x16xY -> DWConv3x3* -> Flatten -> Dense(10)
/// (* = benchmarked layer)
SweepTemplate default_template(SweepFamily family);

/// One validated model per Y in [from, to] with the given step. Throws
/// ValidationError naming Y when an instantiation is invalid.
std::vector<SweepEntry> generate(const SweepSpec& spec);

/// `y,maccs,alignment,file` rows, files named by `sweep_file_name`.
std::string manifest_csv(const std::vector<SweepEntry>& entries, SweepFamily family);
std::string sweep_file_name(SweepFamily family, std::int64_t y);

struct Fixtures {
  ModelSpec lenet;
  ModelSpec resnet20;
};

/// Bundled LeNet (28x28x1) and ResNet-20 (32x32x3, main path) fixtures.
Fixtures fixtures();

/// A small model containing every layer class at every alignment class, for
/// calibrating all profile cells from one log.
ModelSpec calibration_probe();

}  // namespace costlab
