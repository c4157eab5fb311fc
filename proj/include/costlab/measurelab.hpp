// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "costlab/hwmodel.hpp"
#include "costlab/model.hpp"

namespace costlab {

// ---------------------------------------------------------------------------
// Benchmark logs
// ---------------------------------------------------------------------------

/// One timing/energy observation. `layer_index` is nullopt for whole-model
/// ("total") rows, in which case `layer_class` is nullopt as well ("model").
struct MeasurementRecord {
  std::string run_id;
  std::string mcu;
  OptimizationConfig config;
  std::optional<std::int64_t> layer_index;
  std::optional<LayerClass> layer_class;
  double latency_ms = 0.0;
  double energy_mj = 0.0;
  /// Filled in when joined against a model.
  std::optional<std::uint64_t> maccs;

  bool is_total() const { return !layer_index.has_value(); }
  bool operator==(const MeasurementRecord&) const = default;
};

inline constexpr std::string_view kLogHeader =
    "run_id,mcu,quantized,cmsis,fpu,layer_index,layer_class,latency_ms,energy_mj";

/// Parses a CSV benchmark log. Errors carry the 1-based line number.
std::vector<MeasurementRecord> parse_log(std::string_view text);
std::vector<MeasurementRecord> load_log(const std::filesystem::path& path);

/// Writes records in the log format; floats use shortest round-trip form.
std::string write_log(std::span<const MeasurementRecord> records);

// ---------------------------------------------------------------------------
// Latency per operation
// ---------------------------------------------------------------------------

struct DeltaSample {
  std::size_t record = 0;  ///< index into the input records
  std::size_t layer_index = 0;
  LayerClass layer_class = LayerClass::dense;
  AlignmentClass alignment = AlignmentClass::odd;
  std::uint64_t maccs = 0;
  double delta_ns = 0.0;
};

struct DeltaGroup {
  std::string mcu;
  std::string config;
  LayerClass layer_class = LayerClass::dense;
  AlignmentClass alignment = AlignmentClass::odd;
  std::size_t n = 0;
  double mean_delta_ns = 0.0;
  double min_delta_ns = 0.0;
  double max_delta_ns = 0.0;
};

struct DeltaReport {
  std::vector<DeltaSample> samples;
  /// Sorted by (mcu, config, layer class, alignment).
  std::vector<DeltaGroup> groups;
};

/// latency / MACCs for every layer-level record, joined to `model` by layer
/// index. Total rows are skipped. Throws if a record points at a
/// non-compute layer, an out-of-range index, or disagrees on layer class.
DeltaReport empirical_delta(std::span<const MeasurementRecord> records, const ModelSpec& model);

// ---------------------------------------------------------------------------
// Latency/energy regression
// ---------------------------------------------------------------------------

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double pearson_r = 0.0;
  std::size_t n = 0;
  /// Set when y has zero variance: r is reported as 0.
  bool degenerate = false;
};

/// Ordinary least squares y = slope * x + intercept with the product-moment
/// correlation. Throws DegenerateFitError for n < 2 or zero variance in x.
RegressionFit fit_line(std::span<const double> x, std::span<const double> y);

enum class FitGrouping { per_model, per_layer };

/// Energy against latency over the total rows (per_model) or the layer rows
/// (per_layer).
RegressionFit fit_latency_energy(std::span<const MeasurementRecord> records, FitGrouping grouping);

// ---------------------------------------------------------------------------
// Pareto front
// ---------------------------------------------------------------------------

struct ParetoPoint {
  std::string label;
  double latency_ms = 0.0;
  double energy_mj = 0.0;

  bool operator==(const ParetoPoint&) const = default;
};

/// True if `a` is no worse than `b` on both axes and strictly better on one.
bool dominates(const ParetoPoint& a, const ParetoPoint& b);

/// Non-dominated subset (both axes minimized), sorted by latency then energy.
/// Points identical on both axes do not dominate each other.
std::vector<ParetoPoint> pareto_front(std::span<const ParetoPoint> points);

/// One point per (mcu, config): the mean of the total rows, or of the
/// per-run layer sums when a group has no total rows. Labels are "mcu/config".
std::vector<ParetoPoint> points_from_log(std::span<const MeasurementRecord> records);

// ---------------------------------------------------------------------------
// Calibration
// ---------------------------------------------------------------------------

struct CalibrationCell {
  /// "delta_nc.<class>", "gain.<class>.<alignment>" or "avg_power_mw".
  std::string name;
  bool fitted = false;
  std::size_t samples = 0;
  double previous = 0.0;
  double value = 0.0;
};

struct CalibrationReport {
  std::vector<CalibrationCell> cells;
  std::vector<std::string> unfit_cells;
  /// Present when the power cell was fitted.
  std::optional<RegressionFit> power_fit;
  /// In-sample mean absolute percentage error of the calibrated predictions.
  double mape_percent = 0.0;
};

struct CalibrationResult {
  HardwareProfile profile;
  CalibrationReport report;
};

/// Re-estimates delta_nc (from Q rows), gains (from Q+CMSIS rows, per
/// alignment class) and average power (latency/energy slope) by least squares
/// per cell. Unfit cells keep their previous value. Throws CoverageError when
/// no cell can be fitted, and ValidationError if the calibrated gains break
/// the odd <= even <= div4 ordering.
CalibrationResult calibrate(std::span<const MeasurementRecord> records, const ModelSpec& model,
                            const HardwareProfile& profile);

/// Predicted latency for one layer-level record under `profile`.
double predict_latency_ms(const MeasurementRecord& record, const ModelSpec& model,
                          const HardwareProfile& profile);

/// Mean absolute percentage error of `profile` predictions over the
/// layer-level records.
double prediction_mape(std::span<const MeasurementRecord> records, const ModelSpec& model,
                       const HardwareProfile& profile);

// ---------------------------------------------------------------------------
// Synthetic logs
// ---------------------------------------------------------------------------

struct SynthOptions {
  std::string mcu;  ///< defaults to the profile name
  std::vector<OptimizationConfig> configs;
  int runs = 1;
  /// Relative standard deviation of multiplicative Gaussian noise, applied
  /// independently to latency and energy.
  double noise = 0.0;
  std::uint64_t seed = 0;
};

/// Layer rows predicted by `estimate` plus one total row per (run, config).
std::vector<MeasurementRecord> synthesize_log(const ModelSpec& model,
                                              const HardwareProfile& profile,
                                              const SynthOptions& options);

}  // namespace costlab
