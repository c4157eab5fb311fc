// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "costlab/model.hpp"

#include <fmt/format.h>

#include "costlab/error.hpp"
#include "overloaded.hpp"

namespace costlab {
namespace {

using detail::Overloaded;

void require(bool ok, std::size_t index, const char* rule, const std::string& detail) {
  if (!ok) {
    throw ValidationError(fmt::format("layer {}: {} ({})", index, detail, rule), index, rule);
  }
}

void check_window(const Dim2& kernel, const Dim2& stride, const Dim2& padding,
                  const TensorShape& in, std::size_t index) {
  require(kernel.x >= 1 && kernel.y >= 1, index, "K_d >= 1", "kernel must be positive");
  require(stride.x >= 1 && stride.y >= 1, index, "S_d >= 1", "stride must be positive");
  require(padding.x >= 0 && padding.y >= 0, index, "P_d >= 0", "padding must be non-negative");
  require(in.width + 2 * padding.x >= kernel.x, index, "I_d + 2P_d >= K_d",
          fmt::format("kernel width {} exceeds padded input width {}", kernel.x,
                      in.width + 2 * padding.x));
  require(in.height + 2 * padding.y >= kernel.y, index, "I_d + 2P_d >= K_d",
          fmt::format("kernel height {} exceeds padded input height {}", kernel.y,
                      in.height + 2 * padding.y));
}

}  // namespace

std::string_view layer_type_name(const LayerSpec& layer) {
  return std::visit(Overloaded{
                        [](const Dense&) { return std::string_view{"dense"}; },
                        [](const Conv2D&) { return std::string_view{"conv2d"}; },
                        [](const DepthwiseConv2D&) { return std::string_view{"dw_conv2d"}; },
                        [](const Pool&) { return std::string_view{"pool"}; },
                        [](const Flatten&) { return std::string_view{"flatten"}; },
                        [](const Activation&) { return std::string_view{"activation"}; },
                    },
                    layer);
}

bool is_compute(const LayerSpec& layer) {
  return std::holds_alternative<Dense>(layer) || std::holds_alternative<Conv2D>(layer) ||
         std::holds_alternative<DepthwiseConv2D>(layer);
}

std::int64_t output_extent(std::int64_t in, std::int64_t kernel, std::int64_t stride,
                           std::int64_t padding) {
  // Callers guarantee in + 2p >= k, so the numerator is non-negative and
  // integer division is floor division.
  return (in - kernel + 2 * padding) / stride + 1;
}

TensorShape apply_layer(const LayerSpec& layer, const TensorShape& in, std::size_t index) {
  return std::visit(
      Overloaded{
          [&](const Dense& d) {
            require(d.units >= 1, index, "N_out >= 1", "dense units must be positive");
            require(in.is_flat(), index, "dense input flat",
                    fmt::format("dense layer needs a flat input, got {}x{}x{} (insert flatten)",
                                in.height, in.width, in.channels));
            return TensorShape{1, 1, d.units};
          },
          [&](const Conv2D& c) {
            require(c.filters >= 1, index, "C_out >= 1", "filters must be positive");
            check_window(c.kernel, c.stride, c.padding, in, index);
            return TensorShape{output_extent(in.height, c.kernel.y, c.stride.y, c.padding.y),
                               output_extent(in.width, c.kernel.x, c.stride.x, c.padding.x),
                               c.filters};
          },
          [&](const DepthwiseConv2D& c) {
            check_window(c.kernel, c.stride, c.padding, in, index);
            return TensorShape{output_extent(in.height, c.kernel.y, c.stride.y, c.padding.y),
                               output_extent(in.width, c.kernel.x, c.stride.x, c.padding.x),
                               in.channels};
          },
          [&](const Pool& p) {
            check_window(p.kernel, p.stride, Dim2{0, 0}, in, index);
            return TensorShape{output_extent(in.height, p.kernel.y, p.stride.y, 0),
                               output_extent(in.width, p.kernel.x, p.stride.x, 0), in.channels};
          },
          [&](const Flatten&) { return TensorShape{1, 1, in.elements()}; },
          [&](const Activation&) { return in; },
      },
      layer);
}

void validate(const ModelSpec& model) {
  const auto& in = model.input;
  if (in.height < 1 || in.width < 1 || in.channels < 1) {
    throw ValidationError(
        fmt::format("input shape {}x{}x{} must be positive", in.height, in.width, in.channels),
        std::nullopt, "dims >= 1");
  }
  if (model.weight_bits != 8 && model.weight_bits != 16 && model.weight_bits != 32) {
    throw ValidationError(fmt::format("weight_bits {} not in {{8, 16, 32}}", model.weight_bits),
                          std::nullopt, "weight_bits in {8,16,32}");
  }
  if (model.layers.empty()) {
    throw ValidationError("model has no layers", std::nullopt, "non-empty layers");
  }
  TensorShape shape = in;
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    shape = apply_layer(model.layers[i], shape, i);
  }
}

std::vector<TensorShape> infer_shapes(const ModelSpec& model) {
  std::vector<TensorShape> shapes;
  shapes.reserve(model.layers.size() + 1);
  shapes.push_back(model.input);
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    shapes.push_back(apply_layer(model.layers[i], shapes.back(), i));
  }
  return shapes;
}

}  // namespace costlab
