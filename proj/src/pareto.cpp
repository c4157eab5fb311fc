// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include "costlab/measurelab.hpp"

namespace costlab {

bool dominates(const ParetoPoint& a, const ParetoPoint& b) {
  return a.latency_ms <= b.latency_ms && a.energy_mj <= b.energy_mj &&
         (a.latency_ms < b.latency_ms || a.energy_mj < b.energy_mj);
}

std::vector<ParetoPoint> pareto_front(std::span<const ParetoPoint> points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(points[a].latency_ms, points[a].energy_mj) <
           std::tie(points[b].latency_ms, points[b].energy_mj);
  });

  // Sweep groups of equal latency. Within a group only the minimum-energy
  // points survive; they are on the front iff every strictly faster point
  // used strictly more energy.
  std::vector<ParetoPoint> front;
  double best_energy = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  while (i < order.size()) {
    const double latency = points[order[i]].latency_ms;
    const double group_min = points[order[i]].energy_mj;
    std::size_t j = i;
    while (j < order.size() && points[order[j]].latency_ms == latency) {
      if (group_min < best_energy && points[order[j]].energy_mj == group_min) {
        front.push_back(points[order[j]]);
      }
      ++j;
    }
    best_energy = std::min(best_energy, group_min);
    i = j;
  }
  return front;
}

std::vector<ParetoPoint> points_from_log(std::span<const MeasurementRecord> records) {
  struct Acc {
    double latency = 0.0;
    double energy = 0.0;
    std::size_t n = 0;
  };
  using Key = std::pair<std::string, std::string>;
  std::map<Key, Acc> totals;
  // (mcu, config) -> run_id -> summed layers
  std::map<Key, std::map<std::string, Acc>> layer_sums;
  for (const auto& r : records) {
    const Key key{r.mcu, r.config.label()};
    if (r.is_total()) {
      auto& acc = totals[key];
      acc.latency += r.latency_ms;
      acc.energy += r.energy_mj;
      ++acc.n;
    } else {
      auto& acc = layer_sums[key][r.run_id];
      acc.latency += r.latency_ms;
      acc.energy += r.energy_mj;
      ++acc.n;
    }
  }
  for (const auto& [key, runs] : layer_sums) {
    if (totals.contains(key)) continue;
    auto& acc = totals[key];
    for (const auto& [run, sum] : runs) {
      acc.latency += sum.latency;
      acc.energy += sum.energy;
      ++acc.n;
    }
  }
  std::vector<ParetoPoint> points;
  for (const auto& [key, acc] : totals) {
    const auto n = static_cast<double>(acc.n);
    points.push_back({key.first + "/" + key.second, acc.latency / n, acc.energy / n});
  }
  return points;
}

}  // namespace costlab
