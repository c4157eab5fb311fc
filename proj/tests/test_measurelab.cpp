// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "costlab/error.hpp"
#include "costlab/measurelab.hpp"
#include "costlab/sweepgen.hpp"
#include "oracles.hpp"
#include "paths.hpp"

using namespace costlab;

namespace {

const std::vector<OptimizationConfig> kAllConfigs = {
    {false, false, false}, {false, false, true}, {true, false, true}, {true, true, true}};

std::vector<MeasurementRecord> noiseless(const ModelSpec& model, const HardwareProfile& profile,
                                         int runs = 1) {
  SynthOptions o;
  o.configs = kAllConfigs;
  o.runs = runs;
  return synthesize_log(model, profile, o);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string header() { return std::string(kLogHeader) + "\n"; }

}  // namespace

TEST_SUITE("measurelab") {
  TEST_CASE("bundled logs parse completely") {
    for (const char* name : {"logs/lenet_l4_layers.csv", "logs/fig5_pareto.csv"}) {
      const auto records = load_log(data_path(name));
      std::size_t rows = 0;
      std::ifstream in(data_path(name));
      for (std::string line; std::getline(in, line);) rows += line.empty() ? 0 : 1;
      CHECK(records.size() == rows - 1);
    }
  }

  TEST_CASE("log parsing errors are line-numbered") {
    auto line_of = [](const std::string& text) -> std::size_t {
      try {
        parse_log(text);
      } catch (const ParseError& e) {
        return e.line();
      }
      return 0;
    };
    CHECK(line_of(header() + "a,L4,1,1,1,0,dense,0,0\n") == 2);
    CHECK(line_of(header() + "a,L4,1,1,1,0,dense,1,0\na,L4,1,1,1,0,dense,-1,0\n") == 3);
    CHECK(line_of(header() + "a,L4,1,1,1,0,dense,1,-0.5\n") == 2);
    CHECK(line_of(header() + "a,L4,1,1,1,0,dense,1\n") == 2);
    CHECK(line_of(header() + "a,L4,1,1,1,x,dense,1,1\n") == 2);
    CHECK(line_of(header() + "a,L4,0,1,1,0,dense,1,1\n") == 2);
    CHECK(line_of(header() + "a,L4,1,1,1,total,dense,1,1\n") == 2);
    CHECK(line_of(header() + "a,L4,1,1,1,0,lstm,1,1\n") == 2);
    CHECK(line_of("run_id,mcu\n") == 1);
    CHECK(parse_log(header()).empty());
  }

  TEST_CASE("log round trip") {
    auto records = noiseless(fixtures().lenet, builtin_profiles()[1], 2);
    SynthOptions o;
    o.configs = kAllConfigs;
    o.noise = 0.05;
    o.seed = 99;
    const auto noisy = synthesize_log(fixtures().lenet, builtin_profiles()[0], o);
    records.insert(records.end(), noisy.begin(), noisy.end());
    const auto text = write_log(records);
    CHECK(parse_log(text) == records);
    CHECK(write_log(parse_log(text)) == text);
    // Accepts CRLF, a BOM and boolean words.
    const auto r = parse_log("\xEF\xBB\xBF" + std::string(kLogHeader) +
                             "\r\nrun,L4,true,false,true,total,model,2.5,0.1\r\n");
    REQUIRE(r.size() == 1);
    CHECK(r[0].is_total());
    CHECK(r[0].config == OptimizationConfig{true, false, true});
  }

  TEST_CASE("synthesized logs are seed-deterministic") {
    SynthOptions o;
    o.configs = kAllConfigs;
    o.noise = 0.02;
    o.seed = 7;
    const auto p = builtin_profiles()[0];
    CHECK(write_log(synthesize_log(fixtures().lenet, p, o)) ==
          write_log(synthesize_log(fixtures().lenet, p, o)));
    o.seed = 8;
    const auto other = synthesize_log(fixtures().lenet, p, o);
    o.seed = 7;
    CHECK(write_log(synthesize_log(fixtures().lenet, p, o)) != write_log(other));
  }

  TEST_CASE("empirical delta") {
    ModelSpec m;
    m.name = "d";
    m.input = {1, 1, 999};
    m.layers = {Dense{1000}};
    REQUIRE(m.layers.size() == 1);
    MeasurementRecord r{"r", "L4", {true, false, true}, 0, LayerClass::dense, 145.2, 1.0, {}};
    const std::vector<MeasurementRecord> recs{r};
    const auto rep = empirical_delta(recs, m);
    REQUIRE(rep.samples.size() == 1);
    CHECK(rep.samples[0].maccs == 1000000);
    CHECK(rep.samples[0].delta_ns == doctest::Approx(145.2));

    auto bad = r;
    bad.layer_index = 3;
    CHECK_THROWS_AS(empirical_delta(std::vector{bad}, m), Error);
    bad.layer_index = 0;
    bad.layer_class = LayerClass::conv2d;
    CHECK_THROWS_AS(empirical_delta(std::vector{bad}, m), Error);
    m.layers = {Flatten{}, Dense{10}};
    CHECK_THROWS_AS(empirical_delta(recs, m), Error);
  }

  TEST_CASE("empirical delta inverts synthesis") {
    const auto model = calibration_probe();
    for (const auto& p : builtin_profiles()) {
      const auto records = noiseless(model, p);
      const auto rep = empirical_delta(records, model);
      CHECK(rep.samples.size() == 4 * 14);
      const auto shapes = infer_shapes(model);
      for (const auto& s : rep.samples) {
        const auto& cfg = records[s.record].config;
        const double expected = effective_delta(p, s.layer_class, s.alignment, cfg);
        REQUIRE(rel(s.delta_ns, expected) < 1e-9);
      }
      std::set<LayerClass> classes;
      for (const auto& g : rep.groups) classes.insert(g.layer_class);
      CHECK(classes.size() == 4);
    }
  }

  TEST_CASE("regression on exact lines") {
    const std::vector<double> x{0.5, 1.0, 2.0, 3.5, 10.0};
    std::vector<double> y;
    for (double v : x) y.push_back(2.0 * v + 1.0);
    const auto fit = fit_line(x, y);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(fit.pearson_r - 1.0) <= 1e-12);
    CHECK(fit.n == 5);

    const std::vector<double> flat(5, 3.0);
    const auto deg = fit_line(x, flat);
    CHECK(deg.degenerate);
    CHECK(deg.pearson_r == 0.0);
    CHECK(deg.slope == 0.0);
    CHECK_THROWS_AS(fit_line(flat, x), DegenerateFitError);
    CHECK_THROWS_AS(fit_line(std::vector{1.0}, std::vector{1.0}), DegenerateFitError);
  }

  TEST_CASE("pearson r is affine invariant; residuals are orthogonal") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.1, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> x, y;
      for (int i = 0; i < 50; ++i) {
        x.push_back(u(rng));
        y.push_back(0.3 * x.back() + 5.0 * noise(rng));
      }
      const auto base = fit_line(x, y);
      CHECK(std::abs(base.pearson_r) <= 1.0);
      const double a = u(rng), b = u(rng) - 50.0, c = u(rng), d = u(rng) - 50.0;
      std::vector<double> x2, y2;
      for (std::size_t i = 0; i < x.size(); ++i) {
        x2.push_back(a * x[i] + b);
        y2.push_back(c * y[i] + d);
      }
      CHECK(std::abs(fit_line(x2, y2).pearson_r - base.pearson_r) <= 1e-12);

      double dot = 0.0, sum = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double res = y[i] - (base.slope * x[i] + base.intercept);
        dot += res * x[i];
        sum += res;
        scale += std::abs(y[i] * x[i]);
      }
      CHECK(std::abs(dot) <= 1e-9 * scale);
      CHECK(std::abs(sum) <= 1e-9 * scale);
    }
  }

  TEST_CASE("bundled layer log is strongly linear") {
    const auto records = load_log(data_path("logs/lenet_l4_layers.csv"));
    CHECK(fit_latency_energy(records, FitGrouping::per_layer).pearson_r >= 0.99);
    CHECK(fit_latency_energy(records, FitGrouping::per_model).pearson_r >= 0.99);
    CHECK(fit_latency_energy(records, FitGrouping::per_model).n == 12);
  }

  TEST_CASE("pareto examples") {
    const std::vector<ParetoPoint> pts{{"a", 1, 2}, {"b", 2, 1}, {"c", 3, 3}};
    const auto front = pareto_front(pts);
    REQUIRE(front.size() == 2);
    CHECK(front[0].label == "a");
    CHECK(front[1].label == "b");
    const std::vector<ParetoPoint> one{{"x", 5, 5}};
    CHECK(pareto_front(one) == one);
    const std::vector<ParetoPoint> ties{{"x", 1, 1}, {"y", 1, 1}, {"z", 1, 2}, {"w", 0.5, 3}};
    const auto tf = pareto_front(ties);
    CHECK(tf.size() == 3);
    CHECK(dominates(ParetoPoint{"", 1, 1}, ParetoPoint{"", 1, 2}));
    CHECK_FALSE(dominates(ParetoPoint{"", 1, 1}, ParetoPoint{"", 1, 1}));
  }

  TEST_CASE("pareto front equals brute force") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = 1 + rng() % 1000;
      // Coarse grids on some trials force ties on one or both axes.
      const int grid = trial % 3 == 0 ? 10 : 0;
      std::uniform_real_distribution<double> u(0.01, 100.0);
      std::vector<ParetoPoint> pts;
      for (std::size_t i = 0; i < n; ++i) {
        double x = u(rng), y = u(rng);
        if (grid) {
          x = std::ceil(x / grid);
          y = std::ceil(y / grid);
        }
        pts.push_back({std::to_string(i), x, y});
      }
      auto expected = oracle::brute_front(pts);
      auto got = pareto_front(pts);
      REQUIRE(got.size() == expected.size());
      for (std::size_t i = 1; i < got.size(); ++i) CHECK(got[i - 1].latency_ms <= got[i].latency_ms);
      auto by_label = [](const ParetoPoint& a, const ParetoPoint& b) { return a.label < b.label; };
      std::sort(expected.begin(), expected.end(), by_label);
      std::sort(got.begin(), got.end(), by_label);
      REQUIRE(got == expected);
      // Independent checks: the front is dominance-free and covers the rest.
      for (const auto& a : got) {
        for (const auto& b : got) CHECK_FALSE(dominates(a, b));
      }
      for (const auto& p : pts) {
        if (std::find(got.begin(), got.end(), p) != got.end()) continue;
        CHECK(std::any_of(got.begin(), got.end(), [&](const auto& f) { return dominates(f, p); }));
      }
    }
  }

  TEST_CASE("points from logs") {
    const auto records = load_log(data_path("logs/fig5_pareto.csv"));
    const auto points = points_from_log(records);
    CHECK(points.size() == 12);
    for (const auto& p : pareto_front(points)) CHECK(p.label.rfind("F4/", 0) == std::string::npos);

    std::vector<MeasurementRecord> layers_only;
    for (const auto& r : records) {
      if (!r.is_total()) layers_only.push_back(r);
    }
    const auto summed = points_from_log(layers_only);
    REQUIRE(summed.size() == points.size());
    for (std::size_t i = 0; i < summed.size(); ++i) {
      CHECK(summed[i].label == points[i].label);
      CHECK(summed[i].latency_ms == doctest::Approx(points[i].latency_ms).epsilon(0.05));
    }
  }

  TEST_CASE("calibration recovers the generating profile") {
    const auto model = calibration_probe();
    for (const auto& truth : builtin_profiles()) {
      auto start = truth;
      for (auto& [cls, d] : start.delta_nc) d *= 1.7;
      for (auto& [cls, g] : start.gain) g = GainRow{1.0, 1.0, 1.0};
      start.avg_power_mw = 1.0;
      const auto result = calibrate(noiseless(model, truth, 2), model, start);
      CHECK(result.report.unfit_cells.empty());
      CHECK(result.report.cells.size() == 17);
      CHECK(result.profile.calibrated);
      for (auto cls : kLayerClasses) {
        CHECK(rel(result.profile.delta_nc.at(cls), truth.delta_nc.at(cls)) < 1e-3);
        for (auto a : kAlignmentClasses) {
          CHECK(rel(result.profile.gain.at(cls).at(a), truth.gain.at(cls).at(a)) < 1e-3);
        }
      }
      CHECK(rel(result.profile.avg_power_mw, truth.avg_power_mw) < 1e-3);
      CHECK(result.report.mape_percent < 1e-6);
    }
  }

  TEST_CASE("calibration with noise predicts held-out runs") {
    const auto model = calibration_probe();
    const auto truth = builtin_profiles()[0];
    SynthOptions o;
    o.configs = kAllConfigs;
    o.runs = 5;
    o.noise = 0.01;
    o.seed = 1;
    const auto train = synthesize_log(model, truth, o);
    o.seed = 2;
    const auto held_out = synthesize_log(model, truth, o);
    const auto result = calibrate(train, model, truth);
    CHECK(prediction_mape(held_out, model, result.profile) <= 2.0);
  }

  TEST_CASE("calibration coverage") {
    const auto model = calibration_probe();
    try {
      calibrate(std::vector<MeasurementRecord>{}, model, builtin_profiles()[0]);
      FAIL("expected a coverage error");
    } catch (const CoverageError& e) {
      CHECK(e.missing_cells().size() == 17);
    }
    // Q rows only: delta cells fit, gain cells stay untouched and flagged.
    SynthOptions o;
    o.configs = {{true, false, true}};
    const auto truth = builtin_profiles()[0];
    const auto result = calibrate(synthesize_log(model, truth, o), model, truth);
    CHECK(result.report.unfit_cells.size() == 12);
    CHECK(result.profile.gain == truth.gain);
  }
}
