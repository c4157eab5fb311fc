// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "costlab/opcount.hpp"

#include <fmt/format.h>

#include <initializer_list>

#include "costlab/error.hpp"
#include "overloaded.hpp"

namespace costlab {
namespace {

using detail::Overloaded;

std::uint64_t mul(std::initializer_list<std::uint64_t> factors) {
  std::uint64_t acc = 1;
  for (auto f : factors) {
    if (__builtin_mul_overflow(acc, f, &acc)) {
      throw OverflowError("operation count exceeds the 64-bit unsigned range");
    }
  }
  return acc;
}

std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw OverflowError("operation count exceeds the 64-bit unsigned range");
  }
  return r;
}

std::uint64_t u64(std::int64_t v) { return static_cast<std::uint64_t>(v); }

// Number of output positions along both spatial dimensions.
std::uint64_t output_positions(const TensorShape& in, Dim2 kernel, Dim2 stride, Dim2 padding) {
  return mul({u64(output_extent(in.width, kernel.x, stride.x, padding.x)),
              u64(output_extent(in.height, kernel.y, stride.y, padding.y))});
}

}  // namespace

OpCount& OpCount::operator+=(const OpCount& other) {
  flops = add(flops, other.flops);
  maccs = add(maccs, other.maccs);
  params = add(params, other.params);
  return *this;
}

OpCount count_dense(std::uint64_t n_in, std::uint64_t n_out) {
  if (n_in == 0 || n_out == 0) throw ValidationError("dense sizes must be positive", {}, "N >= 1");
  const auto params = mul({n_out, add(n_in, 1)});
  return OpCount{mul({2, n_out, n_in}), params, params};
}

OpCount count_conv2d(const TensorShape& input, Dim2 kernel, Dim2 stride, Dim2 padding,
                     std::uint64_t filters) {
  const auto positions = output_positions(input, kernel, stride, padding);
  const auto taps = mul({u64(kernel.x), u64(kernel.y)});
  const auto c_in = u64(input.channels);
  return OpCount{
      mul({positions, c_in, add(mul({2, taps}), 1), filters}),
      mul({positions, c_in, add(taps, 1), filters}),
      mul({add(mul({taps, c_in}), 1), filters}),
  };
}

OpCount count_dw_conv2d(const TensorShape& input, Dim2 kernel, Dim2 stride, Dim2 padding) {
  const auto positions = output_positions(input, kernel, stride, padding);
  const auto taps = mul({u64(kernel.x), u64(kernel.y)});
  const auto c_in = u64(input.channels);
  return OpCount{
      mul({positions, c_in, add(mul({2, taps}), 1)}),
      mul({positions, c_in, add(taps, 1)}),
      mul({add(taps, 1), c_in}),
  };
}

OpCount count_layer(const LayerSpec& layer, const TensorShape& input) {
  return std::visit(
      Overloaded{
          [&](const Dense& d) { return count_dense(u64(input.elements()), u64(d.units)); },
          [&](const Conv2D& c) {
            return count_conv2d(input, c.kernel, c.stride, c.padding, u64(c.filters));
          },
          [&](const DepthwiseConv2D& c) {
            return count_dw_conv2d(input, c.kernel, c.stride, c.padding);
          },
          [](const auto&) { return OpCount{}; },
      },
      layer);
}

std::uint64_t bias_count(const LayerSpec& layer, const TensorShape& input) {
  return std::visit(Overloaded{
                        [](const Dense& d) { return u64(d.units); },
                        [](const Conv2D& c) { return u64(c.filters); },
                        [&](const DepthwiseConv2D&) { return u64(input.channels); },
                        [](const auto&) { return std::uint64_t{0}; },
                    },
                    layer);
}

ModelCount count_model(const ModelSpec& model) {
  const auto shapes = infer_shapes(model);
  ModelCount result;
  result.per_layer.reserve(model.layers.size());
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    result.per_layer.push_back(count_layer(model.layers[i], shapes[i]));
    result.total += result.per_layer.back();
  }
  return result;
}

FootprintReport footprint(const ModelSpec& model, int weight_bits,
                          std::uint64_t per_tensor_overhead_bytes) {
  if (weight_bits != 8 && weight_bits != 16 && weight_bits != 32) {
    throw ValidationError(fmt::format("unsupported weight bit-width {}", weight_bits), {},
                          "weight_bits in {8,16,32}");
  }
  const auto shapes = infer_shapes(model);
  FootprintReport report;
  std::uint64_t weight_count = 0;
  std::uint64_t tensors = 0;
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const auto& layer = model.layers[i];
    if (!is_compute(layer)) continue;
    const auto params = count_layer(layer, shapes[i]).params;
    const auto biases = bias_count(layer, shapes[i]);
    weight_count = add(weight_count, params - biases);
    report.bias_bytes = add(report.bias_bytes, mul({biases, 4}));
    tensors += 2;
  }
  // Sub-byte totals never occur for the supported widths.
  report.weight_bytes = mul({weight_count, static_cast<std::uint64_t>(weight_bits / 8)});
  report.overhead_bytes = mul({tensors, per_tensor_overhead_bytes});
  return report;
}

}  // namespace costlab
