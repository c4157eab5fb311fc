// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "costlab/error.hpp"
#include "costlab/measurelab.hpp"

namespace costlab {

RegressionFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("fit_line: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw DegenerateFitError(fmt::format("regression needs at least 2 points, got {}", n));

  // Two-pass centered sums.
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0) throw DegenerateFitError("regression undefined: zero variance in latency");

  RegressionFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.degenerate = true;
    fit.pearson_r = 0.0;
  } else {
    fit.pearson_r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  }
  return fit;
}

RegressionFit fit_latency_energy(std::span<const MeasurementRecord> records, FitGrouping grouping) {
  std::vector<double> latency;
  std::vector<double> energy;
  for (const auto& r : records) {
    if (r.is_total() != (grouping == FitGrouping::per_model)) continue;
    latency.push_back(r.latency_ms);
    energy.push_back(r.energy_mj);
  }
  return fit_line(latency, energy);
}

}  // namespace costlab
