// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "costlab/hwmodel.hpp"
#include "costlab/lint.hpp"
#include "costlab/measurelab.hpp"
#include "costlab/opcount.hpp"
#include "costlab/sweepgen.hpp"
#include "oracles.hpp"
#include "paths.hpp"

using namespace costlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const OptimizationConfig kU{false, false, false};
const OptimizationConfig kUFpu{false, false, true};
const OptimizationConfig kQ{true, false, true};
const OptimizationConfig kO{true, true, true};

HardwareProfile l4() { return builtin_profiles()[0]; }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome opcount_oracle() {
  std::mt19937_64 rng(2026);
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  int done = 0;
  int mismatches = 0;
  while (done < 500) {
    const std::int64_t ih = pick(1, 8), iw = pick(1, 8), kh = pick(1, 3), kw = pick(1, 3),
                       sh = pick(1, 2), sw = pick(1, 2), ph = pick(0, 1), pw = pick(0, 1),
                       ci = pick(1, 4), co = pick(1, 4);
    if (ih + 2 * ph < kh || iw + 2 * pw < kw) continue;
    const TensorShape in{ih, iw, ci};
    OpCount closed;
    oracle::Tally brute;
    switch (done % 3) {
      case 0:
        closed = count_conv2d(in, {kw, kh}, {sw, sh}, {pw, ph}, static_cast<std::uint64_t>(co));
        brute = oracle::conv_loop_nest(ih, iw, ci, kh, kw, sh, sw, ph, pw, co);
        break;
      case 1:
        closed = count_dw_conv2d(in, {kw, kh}, {sw, sh}, {pw, ph});
        brute = oracle::dw_loop_nest(ih, iw, ci, kh, kw, sh, sw, ph, pw);
        break;
      default:
        closed = count_dense(static_cast<std::uint64_t>(ih * iw * ci), static_cast<std::uint64_t>(co));
        brute = oracle::dense_loop_nest(ih * iw * ci, co);
        break;
    }
    if (closed.maccs != brute.maccs || closed.flops != brute.flops) ++mismatches;
    ++done;
  }
  return {mismatches == 0, fmt::format("{} configs, {} mismatches", done, mismatches)};
}

Outcome dense_identity() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> d(1, 100000);
  int bad = 0;
  for (int i = 0; i < 200; ++i) {
    const auto n_in = d(rng), n_out = d(rng);
    const auto c = count_dense(n_in, n_out);
    if (c.flops != 2 * (c.params - n_out)) ++bad;
  }
  return {bad == 0, fmt::format("200 pairs, {} violations", bad)};
}

Outcome fixture_ratios() {
  const auto f = fixtures();
  const auto lenet = count_model(f.lenet).total;
  const auto resnet = count_model(f.resnet20).total;
  const double params = static_cast<double>(resnet.params) / static_cast<double>(lenet.params);
  const double maccs = static_cast<double>(resnet.maccs) / static_cast<double>(lenet.maccs);
  const bool ok = params >= 3.0 && params <= 3.8 && rel(maccs, 141.3) <= 0.15;
  return {ok, fmt::format("params {:.3f}x in [3.0, 3.8], MACCs {:.2f}x vs 141.3x ({:+.1f}%)", params,
                          maccs, 100.0 * (maccs / 141.3 - 1.0))};
}

Outcome footprint_bands() {
  const auto lenet = fixtures().lenet;
  const double kib32 = footprint(lenet, 32).total_kib();
  const double kib8 = footprint(lenet, 8).total_kib();
  const double ratio = kib8 / kib32;
  const bool ok = rel(kib32, 320.28) <= 0.02 && ratio >= 0.25 && ratio <= 0.28;
  return {ok, fmt::format("32-bit {:.2f} KiB vs 320.28 ({:+.2f}%), 8/32 ratio {:.4f}", kib32,
                          100.0 * (kib32 / 320.28 - 1.0), ratio)};
}

Outcome fit_check_resnet() {
  const auto resnet = fixtures().resnet20;
  const auto p = l4();
  const auto flt = fit_check(resnet, p, kUFpu);
  const auto q = fit_check(resnet, p, kO);
  const bool ok = !flt.fits && flt.reason == "flash" && q.fits;
  return {ok, fmt::format("float flash {} / {} B ({}), quantized flash {} B ({})", flt.flash_needed,
                          flt.flash_available, flt.fits ? "fits" : "oversized: " + flt.reason,
                          q.flash_needed, q.fits ? "fits" : "oversized")};
}

Outcome speedup_band() {
  const double s = speedup(fixtures().lenet, l4(), kU, kO);
  return {s >= 10.0 && s <= 17.0, fmt::format("U(no FPU) / Q+CMSIS = {:.2f}x in [10, 17]", s)};
}

Outcome pareto_checks() {
  std::mt19937_64 rng(5);
  int bad = 0;
  std::size_t largest = 0;
  for (int set = 0; set < 100; ++set) {
    const std::size_t n = set == 0 ? 1000 : 1 + rng() % 1000;
    largest = std::max(largest, n);
    std::uniform_real_distribution<double> u(0.1, 50.0);
    std::vector<ParetoPoint> pts;
    for (std::size_t i = 0; i < n; ++i) {
      double x = u(rng), y = u(rng);
      if (set % 4 == 0) {
        x = std::round(x);
        y = std::round(y);
      }
      pts.push_back({std::to_string(i), x, y});
    }
    auto got = pareto_front(pts);
    auto want = oracle::brute_front(pts);
    auto by_label = [](const ParetoPoint& a, const ParetoPoint& b) { return a.label < b.label; };
    std::sort(got.begin(), got.end(), by_label);
    std::sort(want.begin(), want.end(), by_label);
    if (got != want) ++bad;
  }
  const auto fig5 = points_from_log(load_log(data_path("logs/fig5_pareto.csv")));
  const auto front = pareto_front(fig5);
  std::string labels;
  bool f4 = false;
  for (const auto& p : front) {
    labels += (labels.empty() ? "" : ", ") + p.label;
    f4 = f4 || p.label.rfind("F4/", 0) == 0;
  }
  return {bad == 0 && !f4,
          fmt::format("100 sets (max {} points), {} mismatches; fixture front {{{}}}", largest, bad,
                      labels)};
}

Outcome regression_checks() {
  std::vector<double> x, y;
  for (int i = 1; i <= 50; ++i) {
    x.push_back(0.37 * i);
    y.push_back(3.3 * x.back() - 0.25);
  }
  const double exact = fit_line(x, y).pearson_r;
  const auto records = load_log(data_path("logs/lenet_l4_layers.csv"));
  const double noisy = fit_latency_energy(records, FitGrouping::per_layer).pearson_r;
  const bool ok = std::abs(exact - 1.0) <= 1e-12 && noisy >= 0.99;
  return {ok, fmt::format("exact line |r - 1| = {:.1e}, bundled layer log r = {:.5f}",
                          std::abs(exact - 1.0), noisy)};
}

Outcome calibration_round_trip() {
  const auto model = calibration_probe();
  const auto truth = l4();
  SynthOptions o;
  o.configs = {kU, kUFpu, kQ, kO};
  o.runs = 2;
  const auto records = synthesize_log(model, truth, o);
  auto start = truth;
  for (auto& [cls, d] : start.delta_nc) d *= 2.0;
  for (auto& [cls, g] : start.gain) g = GainRow{1.0, 1.0, 1.0};
  start.avg_power_mw = 100.0;
  const auto cal = calibrate(records, model, start).profile;
  double worst = rel(cal.avg_power_mw, truth.avg_power_mw);
  for (auto cls : kLayerClasses) {
    worst = std::max(worst, rel(cal.delta_nc.at(cls), truth.delta_nc.at(cls)));
    for (auto a : kAlignmentClasses) {
      worst = std::max(worst, rel(cal.gain.at(cls).at(a), truth.gain.at(cls).at(a)));
    }
  }
  return {worst <= 1e-3, fmt::format("17 cells, worst relative error {:.2e}", worst)};
}

ModelSpec conv_layer(std::int64_t c_in) {
  ModelSpec m;
  m.name = "lint_case";
  m.input = {12, 12, c_in};
  m.weight_bits = 8;
  m.layers = {Conv2D{{3, 3}, {1, 1}, {1, 1}, 16}};
  return m;
}

const Finding* r1_of(const std::vector<Finding>& findings) {
  for (const auto& f : findings) {
    if (f.rule_id == "R1") return &f;
  }
  return nullptr;
}

Outcome lint_soundness() {
  const auto p = l4();
  const auto f7 = lint_model(conv_layer(7), p);
  const auto* seven = r1_of(f7);
  if (!seven || !seven->estimated_gain) return {false, "no R1 finding for C_in = 7"};
  const double gain_err = std::abs(*seven->estimated_gain - 7.03 / 6.42);

  // 15 -> 16 channels: MACC growth 16/15 is below the odd->div4 gain.
  const auto f15 = lint_model(conv_layer(15), p);
  const auto* fifteen = r1_of(f15);
  if (!fifteen || !fifteen->suggested) return {false, "no R1 finding for C_in = 15"};
  const auto before = estimate(conv_layer(15), p, kO).per_layer[0];
  const auto after =
      estimate(conv_layer(static_cast<std::int64_t>(*fifteen->suggested)), p, kO).per_layer[0];
  const double growth = static_cast<double>(after.maccs) / static_cast<double>(before.maccs);
  const double reduction = before.latency_ms / after.latency_ms;
  const double sound_err = std::abs(reduction - *fifteen->estimated_gain / growth);
  const bool ok = gain_err <= 1e-6 && after.maccs > before.maccs &&
                  after.latency_ms < before.latency_ms && sound_err <= 1e-6;
  return {ok, fmt::format("C_in 7 gain {:.6f} (err {:.1e}); C_in 15->{}: MACCs x{:.4f}, latency "
                          "{:.4f} -> {:.4f} ms",
                          *seven->estimated_gain, gain_err, *fifteen->suggested, growth,
                          before.latency_ms, after.latency_ms)};
}

Outcome sweep_generation() {
  const auto entries = generate({SweepFamily::conv_filters, 1, 64, 1, std::nullopt});
  int invalid = 0, order = 0, labels = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    try {
      validate(e.model);
    } catch (const std::exception&) {
      ++invalid;
    }
    if (i > 0 && e.maccs <= entries[i - 1].maccs) ++order;
    const auto n = e.y;
    const auto want = n % 4 == 0   ? AlignmentClass::div4
                      : n % 2 == 0 ? AlignmentClass::even
                                   : AlignmentClass::odd;
    if (e.alignment != want) ++labels;
  }
  const bool ok = entries.size() == 64 && invalid == 0 && order == 0 && labels == 0;
  return {ok, fmt::format("{} models, {} invalid, {} order breaks, {} label errors", entries.size(),
                          invalid, order, labels)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"op-count oracle equivalence", opcount_oracle},
      {"dense FLOPs identity", dense_identity},
      {"fixture params/MACC ratios", fixture_ratios},
      {"LeNet footprint", footprint_bands},
      {"ResNet-20 fit on L4", fit_check_resnet},
      {"LeNet L4 speedup band", speedup_band},
      {"Pareto front correctness", pareto_checks},
      {"latency/energy regression", regression_checks},
      {"calibration round trip", calibration_round_trip},
      {"lint gain soundness", lint_soundness},
      {"conv_filters sweep", sweep_generation},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                        .count();
    fmt::print("[{}] {:2}. {}: {} ({:.0f} ms)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
               o.detail, ms);
    failed += o.pass ? 0 : 1;
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
             criteria.size());
  return failed == 0 ? 0 : 1;
}
