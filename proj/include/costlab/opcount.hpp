// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "costlab/model.hpp"

namespace costlab {

/// Closed-form operation and parameter counts.
///
/// MACCs include one bias term per output element and input channel for
/// convolutions (one per output unit for dense layers), so for dense layers
/// `maccs == params`. FLOPs count multiplies and adds separately.
struct OpCount {
  std::uint64_t flops = 0;
  std::uint64_t maccs = 0;
  std::uint64_t params = 0;

  OpCount& operator+=(const OpCount& other);
  friend OpCount operator+(OpCount a, const OpCount& b) { return a += b; }
  bool operator==(const OpCount&) const = default;
};

OpCount count_dense(std::uint64_t n_in, std::uint64_t n_out);

OpCount count_conv2d(const TensorShape& input, Dim2 kernel, Dim2 stride, Dim2 padding,
                     std::uint64_t filters);

OpCount count_dw_conv2d(const TensorShape& input, Dim2 kernel, Dim2 stride, Dim2 padding);

/// Counts for one layer applied to `input`. Non-compute layers yield zeros.
OpCount count_layer(const LayerSpec& layer, const TensorShape& input);

/// Number of bias values held by `layer` (zero for non-compute layers).
std::uint64_t bias_count(const LayerSpec& layer, const TensorShape& input);

struct ModelCount {
  std::vector<OpCount> per_layer;
  OpCount total;
};

ModelCount count_model(const ModelSpec& model);

/// Default bytes of quantization metadata (scale, zero point, ...) stored
/// alongside each parameter tensor.
inline constexpr std::uint64_t kDefaultTensorOverheadBytes = 64;

struct FootprintReport {
  std::uint64_t weight_bytes = 0;
  std::uint64_t bias_bytes = 0;
  std::uint64_t overhead_bytes = 0;

  std::uint64_t total_bytes() const { return weight_bytes + bias_bytes + overhead_bytes; }
  /// KiB = 1024 bytes.
  double total_kib() const { return static_cast<double>(total_bytes()) / 1024.0; }
};

/// Parameter storage. Weights are stored at `weight_bits`; biases stay
/// 32-bit; every compute layer holds two parameter tensors (weights and
/// bias), each charged `per_tensor_overhead_bytes`.
FootprintReport footprint(const ModelSpec& model, int weight_bits,
                          std::uint64_t per_tensor_overhead_bytes = kDefaultTensorOverheadBytes);

}  // namespace costlab
