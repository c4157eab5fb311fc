// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include <algorithm>
#include <random>

#include "costlab/error.hpp"
#include "costlab/measurelab.hpp"

namespace costlab {

std::vector<MeasurementRecord> synthesize_log(const ModelSpec& model,
                                              const HardwareProfile& profile,
                                              const SynthOptions& options) {
  if (options.runs < 1) throw Error("synthesize_log: runs must be >= 1");
  if (options.noise < 0.0 || options.noise >= 0.5) {
    throw Error("synthesize_log: noise must be in [0, 0.5)");
  }
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto jitter = [&](double value) {
    if (options.noise == 0.0) return value;
    // Clamp at 3 sigma so latencies stay positive.
    return value * (1.0 + options.noise * std::clamp(normal(rng), -3.0, 3.0));
  };

  const std::string mcu = options.mcu.empty() ? profile.name : options.mcu;
  std::vector<MeasurementRecord> records;
  for (const auto& config : options.configs) {
    const auto est = estimate(model, profile, config);
    for (int run = 0; run < options.runs; ++run) {
      const auto run_id = fmt::format("{}-{}-r{}", mcu, config.label(), run);
      double total_latency = 0.0;
      double total_energy = 0.0;
      for (std::size_t i = 0; i < est.per_layer.size(); ++i) {
        const auto& le = est.per_layer[i];
        if (!le.layer_class) continue;
        MeasurementRecord r;
        r.run_id = run_id;
        r.mcu = mcu;
        r.config = config;
        r.layer_index = static_cast<std::int64_t>(i);
        r.layer_class = le.layer_class;
        r.latency_ms = jitter(le.latency_ms);
        r.energy_mj = jitter(r.latency_ms * profile.avg_power_mw / 1000.0);
        total_latency += r.latency_ms;
        total_energy += r.energy_mj;
        records.push_back(std::move(r));
      }
      if (total_latency > 0.0) {
        MeasurementRecord total;
        total.run_id = run_id;
        total.mcu = mcu;
        total.config = config;
        total.latency_ms = total_latency;
        total.energy_mj = total_energy;
        records.push_back(std::move(total));
      }
    }
  }
  return records;
}

}  // namespace costlab
