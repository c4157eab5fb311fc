// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace costlab {

/// Activation tensor extent in elements (height = I_y, width = I_x).
struct TensorShape {
  std::int64_t height = 1;
  std::int64_t width = 1;
  std::int64_t channels = 1;

  std::int64_t elements() const { return height * width * channels; }
  bool is_flat() const { return height == 1 && width == 1; }
  bool operator==(const TensorShape&) const = default;
};

/// A pair of per-dimension values; `x` runs along the width, `y` along the height.
struct Dim2 {
  std::int64_t x = 1;
  std::int64_t y = 1;

  bool operator==(const Dim2&) const = default;
};

enum class PoolKind { max, avg };
enum class ActivationKind { relu, softmax, tanh, sigmoid };

struct Dense {
  std::int64_t units = 1;
  bool operator==(const Dense&) const = default;
};

struct Conv2D {
  Dim2 kernel;
  Dim2 stride;
  Dim2 padding{0, 0};
  std::int64_t filters = 1;
  bool operator==(const Conv2D&) const = default;
};

/// Depth multiplier is fixed at 1: output channels equal input channels.
struct DepthwiseConv2D {
  Dim2 kernel;
  Dim2 stride;
  Dim2 padding{0, 0};
  bool operator==(const DepthwiseConv2D&) const = default;
};

struct Pool {
  Dim2 kernel;
  Dim2 stride;
  PoolKind kind = PoolKind::max;
  bool operator==(const Pool&) const = default;
};

struct Flatten {
  bool operator==(const Flatten&) const = default;
};

struct Activation {
  ActivationKind kind = ActivationKind::relu;
  bool operator==(const Activation&) const = default;
};

using LayerSpec = std::variant<Dense, Conv2D, DepthwiseConv2D, Pool, Flatten, Activation>;

/// Architecture-only network description. No weights are stored.
struct ModelSpec {
  std::string name;
  TensorShape input;
  std::vector<LayerSpec> layers;
  int weight_bits = 32;
  /// Free-form annotations (e.g. reported accuracy). Never interpreted.
  std::map<std::string, std::string> metadata;

  bool operator==(const ModelSpec&) const = default;
};

/// Type tag used in the JSON format ("dense", "conv2d", ...).
std::string_view layer_type_name(const LayerSpec& layer);

/// True for layers that carry parameters and operations (dense, conv, depthwise).
bool is_compute(const LayerSpec& layer);

/// floor((in - kernel + 2 * padding) / stride) + 1.
std::int64_t output_extent(std::int64_t in, std::int64_t kernel, std::int64_t stride,
                           std::int64_t padding);

/// Shape produced by `layer` on `input`. Throws ValidationError naming
/// `index` and the violated rule when the layer cannot be applied.
TensorShape apply_layer(const LayerSpec& layer, const TensorShape& input, std::size_t index);

/// Checks every ModelSpec invariant; throws ValidationError on the first violation.
void validate(const ModelSpec& model);

/// Shapes at every layer boundary: element 0 is the input, element i+1 the
/// output of layer i. The model must already be valid.
std::vector<TensorShape> infer_shapes(const ModelSpec& model);

/// Parses and validates a model description document.
ModelSpec parse_model(std::string_view text);

/// Emits the canonical JSON form. Throws ValidationError for invalid models.
std::string serialize_model(const ModelSpec& model);

ModelSpec load_model(const std::filesystem::path& path);
void save_model(const ModelSpec& model, const std::filesystem::path& path);

}  // namespace costlab
