// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "costlab/model.hpp"
#include "costlab/opcount.hpp"

namespace costlab {

/// Divisibility of a layer's input length or input-channel count. Exclusive:
/// div4 if n % 4 == 0, else even if n % 2 == 0, else odd.
enum class AlignmentClass { odd, even, div4 };

enum class LayerClass { dense, conv2d, conv2d_1x1, dw_conv2d };

inline constexpr std::array<AlignmentClass, 3> kAlignmentClasses{
    AlignmentClass::odd, AlignmentClass::even, AlignmentClass::div4};
inline constexpr std::array<LayerClass, 4> kLayerClasses{
    LayerClass::dense, LayerClass::conv2d, LayerClass::conv2d_1x1, LayerClass::dw_conv2d};

std::string_view to_string(AlignmentClass a);
std::string_view to_string(LayerClass c);
std::optional<AlignmentClass> alignment_from_string(std::string_view s);
std::optional<LayerClass> layer_class_from_string(std::string_view s);

AlignmentClass classify_alignment(std::uint64_t n);

/// Hardware class of a compute layer; nullopt for pool/flatten/activation.
/// Convolutions with a 1x1 kernel form their own class.
std::optional<LayerClass> layer_class(const LayerSpec& layer);

/// The dimension whose alignment governs kernel efficiency: the flattened
/// input length for dense layers, the input channel count for convolutions.
/// Throws EstimateError for non-compute layers.
std::uint64_t alignment_driver(const LayerSpec& layer, const TensorShape& input);

/// Optimized-kernel speedup over the plain kernel, per alignment class.
struct GainRow {
  double odd = 1.0;
  double even = 1.0;
  double div4 = 1.0;

  double at(AlignmentClass a) const;
  double& at(AlignmentClass a);
  bool operator==(const GainRow&) const = default;
};

struct HardwareProfile {
  std::string name;
  std::string description;
  double clock_mhz = 0.0;
  std::uint64_t flash_bytes = 0;
  std::uint64_t ram_bytes = 0;
  bool has_fpu = true;
  /// Latency per MACC of the plain 8-bit kernels, in ns.
  std::map<LayerClass, double> delta_nc;
  std::map<LayerClass, GainRow> gain;
  /// Float latency multiplier when the FPU is unavailable or disabled.
  double fpu_off_penalty = 4.0;
  /// Float-with-FPU latency relative to the plain 8-bit kernels.
  double float_vs_q_factor = 1.0;
  double avg_power_mw = 0.0;
  std::uint64_t code_size_bytes = 0;
  /// False while power and scaling values are placeholders.
  bool calibrated = false;

  bool operator==(const HardwareProfile&) const = default;
};

/// Throws ValidationError if a profile invariant does not hold.
void validate(const HardwareProfile& profile);

HardwareProfile parse_profile(std::string_view json_text);
std::string serialize_profile(const HardwareProfile& profile);
HardwareProfile load_profile(const std::filesystem::path& path);

/// L4, F4 and F7 reference profiles.
std::vector<HardwareProfile> builtin_profiles();

/// Resolves a profile by builtin name (case-insensitive), then `<name>.json`
/// in each directory of `search_dirs`, then as a file path.
HardwareProfile resolve_profile(std::string_view name_or_path,
                                const std::vector<std::filesystem::path>& search_dirs = {});

struct OptimizationConfig {
  bool quantized = false;
  bool cmsis = false;
  bool fpu_enabled = true;

  /// "U", "U+FPU", "Q" or "Q+CMSIS".
  std::string label() const;
  static OptimizationConfig from_label(std::string_view label);
  bool operator==(const OptimizationConfig&) const = default;
};

/// Optimized kernels exist only on the 8-bit path.
void validate(const OptimizationConfig& config);

struct LayerEstimate {
  std::optional<LayerClass> layer_class;
  std::optional<AlignmentClass> alignment;
  std::uint64_t maccs = 0;
  double delta_ns_per_op = 0.0;
  double latency_ms = 0.0;
  double energy_mj = 0.0;
};

struct Estimate {
  std::vector<LayerEstimate> per_layer;
  double total_latency_ms = 0.0;
  double total_energy_mj = 0.0;
};

/// Latency per MACC (ns) for one layer under `config`.
double effective_delta(const HardwareProfile& profile, LayerClass cls, AlignmentClass alignment,
                       const OptimizationConfig& config);

Estimate estimate(const ModelSpec& model, const HardwareProfile& profile,
                  const OptimizationConfig& config);

/// total_latency(a) / total_latency(b).
double speedup(const ModelSpec& model, const HardwareProfile& profile,
               const OptimizationConfig& a, const OptimizationConfig& b);

struct FitReport {
  bool fits = true;
  std::uint64_t flash_needed = 0;
  std::uint64_t ram_needed = 0;
  std::uint64_t flash_available = 0;
  std::uint64_t ram_available = 0;
  /// Empty, "flash", "ram" or "flash+ram".
  std::string reason;
};

/// Flash: parameter footprint (8-bit if quantized, else 32-bit) plus the
/// firmware constant. RAM: largest input+output activation pair.
FitReport fit_check(const ModelSpec& model, const HardwareProfile& profile,
                    const OptimizationConfig& config,
                    std::uint64_t per_tensor_overhead_bytes = kDefaultTensorOverheadBytes);

}  // namespace costlab
