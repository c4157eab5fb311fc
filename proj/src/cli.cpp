// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "costlab/cli.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <json.hpp>
#include <sstream>
#include <vector>

#include "costlab/error.hpp"
#include "costlab/hwmodel.hpp"
#include "costlab/lint.hpp"
#include "costlab/measurelab.hpp"
#include "costlab/model.hpp"
#include "costlab/opcount.hpp"
#include "costlab/sweepgen.hpp"

namespace costlab::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// helpers

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << text;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::vector<fs::path> profile_search_dirs() {
  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("COSTLAB_PROFILE_DIR")) {
    std::string_view rest(env);
    while (!rest.empty()) {
      const auto colon = rest.find(':');
      const auto part = rest.substr(0, colon);
      if (!part.empty()) dirs.emplace_back(std::string(part));
      if (colon == std::string_view::npos) break;
      rest.remove_prefix(colon + 1);
    }
  }
  return dirs;
}

// Tracks the files a subcommand read and wraps payloads in the envelope.
class Envelope {
 public:
  explicit Envelope(std::string subcommand) : subcommand_(std::move(subcommand)) {}

  std::string read(const std::string& path) {
    auto text = read_file(path);
    inputs_.push_back({{"path", path}, {"sha256", sha256_hex(text)}});
    return text;
  }
  void add_input(const std::string& path, std::string_view text) {
    inputs_.push_back({{"path", path}, {"sha256", sha256_hex(text)}});
  }
  void warn(std::string message) { warnings_.push_back(std::move(message)); }
  const std::vector<std::string>& warnings() const { return warnings_; }

  std::string dump(json payload) const {
    json doc;
    doc["tool_version"] = std::string(kToolVersion);
    doc["subcommand"] = subcommand_;
    doc["inputs"] = inputs_;
    doc["payload"] = std::move(payload);
    doc["warnings"] = warnings_;
    return doc.dump(2) + "\n";
  }

 private:
  std::string subcommand_;
  json inputs_ = json::array();
  std::vector<std::string> warnings_;
};

void print_warnings(const Envelope& env, std::ostream& err) {
  for (const auto& w : env.warnings()) err << "warning: " << w << "\n";
}

// Left-aligned first column, right-aligned numbers.
class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void print(std::ostream& out) const {
    std::vector<std::size_t> width(rows_.front().size(), 0);
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      std::string line;
      for (std::size_t c = 0; c < rows_[r].size(); ++c) {
        if (c > 0) line += "  ";
        line += c == 0 ? fmt::format("{:<{}}", rows_[r][c], width[c])
                       : fmt::format("{:>{}}", rows_[r][c], width[c]);
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out << line << "\n";
      if (r == 0) {
        std::size_t total = 0;
        for (auto w : width) total += w + 2;
        out << std::string(total - 2, '-') << "\n";
      }
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string shape_str(const TensorShape& s) {
  return fmt::format("{}x{}x{}", s.height, s.width, s.channels);
}

json shape_json(const TensorShape& s) { return {{"h", s.height}, {"w", s.width}, {"c", s.channels}}; }

json count_json(const OpCount& c) {
  return {{"flops", c.flops}, {"maccs", c.maccs}, {"params", c.params}};
}

json footprint_json(const FootprintReport& f) {
  return {{"weight_bytes", f.weight_bytes},
          {"bias_bytes", f.bias_bytes},
          {"overhead_bytes", f.overhead_bytes},
          {"total_bytes", f.total_bytes()},
          {"total_kib", f.total_kib()}};
}

json fit_json(const FitReport& f) {
  return {{"fits", f.fits},
          {"flash_needed", f.flash_needed},
          {"flash_available", f.flash_available},
          {"ram_needed", f.ram_needed},
          {"ram_available", f.ram_available},
          {"reason", f.reason}};
}

json regression_json(const RegressionFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"pearson_r", f.pearson_r},
          {"n", f.n},
          {"degenerate", f.degenerate}};
}

bool want_json(const std::string& format) { return format == "json"; }

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeResult {
  std::string path;
  std::string text;
  ModelSpec model;
  std::vector<TensorShape> shapes;
  ModelCount counts;
  FootprintReport fp32;
  FootprintReport fp8;
};

AnalyzeResult analyze_file(const std::string& path, std::uint64_t overhead) {
  AnalyzeResult r;
  r.path = path;
  r.text = read_file(path);
  try {
    r.model = parse_model(r.text);
  } catch (const Error& e) {
    throw Error(fmt::format("{}: {}", path, e.what()));
  }
  r.shapes = infer_shapes(r.model);
  r.counts = count_model(r.model);
  r.fp32 = footprint(r.model, 32, overhead);
  r.fp8 = footprint(r.model, 8, overhead);
  return r;
}

int cmd_analyze(const std::vector<std::string>& files, std::uint64_t overhead,
                const std::string& format, std::ostream& out) {
  // Files are independent; results are emitted in input order.
  std::vector<std::future<AnalyzeResult>> jobs;
  for (const auto& f : files) {
    jobs.push_back(std::async(std::launch::async, analyze_file, f, overhead));
  }
  std::vector<AnalyzeResult> results;
  for (auto& j : jobs) results.push_back(j.get());

  Envelope env("analyze");
  json models = json::array();
  for (const auto& r : results) {
    env.add_input(r.path, r.text);
    const double total_maccs = static_cast<double>(r.counts.total.maccs);
    double cumulative = 0.0;
    json layers = json::array();
    Table table({"#", "type", "output", "params", "MACCs", "FLOPs", "cum%"});
    for (std::size_t i = 0; i < r.model.layers.size(); ++i) {
      const auto& c = r.counts.per_layer[i];
      cumulative += static_cast<double>(c.maccs);
      const double pct = total_maccs > 0 ? 100.0 * cumulative / total_maccs : 0.0;
      const auto type = std::string(layer_type_name(r.model.layers[i]));
      json row = count_json(c);
      row["index"] = i;
      row["type"] = type;
      row["output_shape"] = shape_json(r.shapes[i + 1]);
      row["cumulative_pct"] = pct;
      layers.push_back(row);
      table.add({std::to_string(i), type, shape_str(r.shapes[i + 1]), std::to_string(c.params),
                 std::to_string(c.maccs), std::to_string(c.flops), fmt::format("{:.1f}", pct)});
    }
    if (want_json(format)) {
      models.push_back({{"file", r.path},
                        {"name", r.model.name},
                        {"input", shape_json(r.model.input)},
                        {"weight_bits", r.model.weight_bits},
                        {"layers", layers},
                        {"total", count_json(r.counts.total)},
                        {"footprint", {{"bits32", footprint_json(r.fp32)},
                                       {"bits8", footprint_json(r.fp8)}}}});
    } else {
      out << fmt::format("model {} ({}), input {}\n", r.model.name, r.path,
                         shape_str(r.model.input));
      table.add({"total", "", "", std::to_string(r.counts.total.params),
                 std::to_string(r.counts.total.maccs), std::to_string(r.counts.total.flops),
                 "100.0"});
      table.print(out);
      out << fmt::format("footprint: {:.2f} KiB at 32 bit, {:.2f} KiB at 8 bit ({:.1f}%)\n\n",
                         r.fp32.total_kib(), r.fp8.total_kib(),
                         100.0 * r.fp8.total_kib() / r.fp32.total_kib());
    }
  }
  if (want_json(format)) out << env.dump({{"models", models}});
  return kExitOk;
}

// ---------------------------------------------------------------------------
// estimate

int cmd_estimate(const std::string& model_path, const std::string& profile_name, bool quantized,
                 bool cmsis, int fpu_flag, const std::string& format, std::ostream& out,
                 std::ostream& err) {
  Envelope env("estimate");
  const auto model = parse_model(env.read(model_path));
  const auto profile = resolve_profile(profile_name, profile_search_dirs());
  OptimizationConfig config{quantized, cmsis, fpu_flag == 0 ? profile.has_fpu : fpu_flag > 0};
  validate(config);
  if (!config.quantized && config.fpu_enabled && !profile.has_fpu) {
    env.warn(fmt::format("{} has no FPU; float estimate uses the FPU-off penalty", profile.name));
  }

  const auto est = estimate(model, profile, config);
  const OptimizationConfig baseline{false, false, false};
  const auto base_latency = estimate(model, profile, baseline).total_latency_ms;
  const auto fit = fit_check(model, profile, config);
  if (!fit.fits) env.warn(fmt::format("model is oversized for {} ({})", profile.name, fit.reason));
  if (!profile.calibrated) {
    env.warn(fmt::format("profile {} is uncalibrated; energy uses placeholder power",
                         profile.name));
  }
  json speedup = nullptr;
  if (est.total_latency_ms > 0.0) {
    speedup = {{"baseline", baseline.label()}, {"ratio", base_latency / est.total_latency_ms}};
  }

  if (want_json(format)) {
    json layers = json::array();
    for (std::size_t i = 0; i < est.per_layer.size(); ++i) {
      const auto& le = est.per_layer[i];
      layers.push_back({{"index", i},
                        {"type", std::string(layer_type_name(model.layers[i]))},
                        {"layer_class", le.layer_class ? json(std::string(to_string(*le.layer_class)))
                                                       : json(nullptr)},
                        {"alignment", le.alignment ? json(std::string(to_string(*le.alignment)))
                                                   : json(nullptr)},
                        {"maccs", le.maccs},
                        {"delta_ns_per_op", le.delta_ns_per_op},
                        {"latency_ms", le.latency_ms},
                        {"energy_mj", le.energy_mj}});
    }
    out << env.dump({{"model", model.name},
                     {"profile", profile.name},
                     {"config", config.label()},
                     {"per_layer", layers},
                     {"total_latency_ms", est.total_latency_ms},
                     {"total_energy_mj", est.total_energy_mj},
                     {"speedup", speedup},
                     {"fit", fit_json(fit)}});
  } else {
    out << fmt::format("model {} on {} with {}\n", model.name, profile.name, config.label());
    Table table({"#", "type", "class", "align", "MACCs", "ns/op", "latency ms", "energy mJ"});
    for (std::size_t i = 0; i < est.per_layer.size(); ++i) {
      const auto& le = est.per_layer[i];
      if (!le.layer_class) continue;
      table.add({std::to_string(i), std::string(layer_type_name(model.layers[i])),
                 std::string(to_string(*le.layer_class)), std::string(to_string(*le.alignment)),
                 std::to_string(le.maccs), fmt::format("{:.2f}", le.delta_ns_per_op),
                 fmt::format("{:.4f}", le.latency_ms), fmt::format("{:.5f}", le.energy_mj)});
    }
    table.add({"total", "", "", "", "", "", fmt::format("{:.4f}", est.total_latency_ms),
               fmt::format("{:.5f}", est.total_energy_mj)});
    table.print(out);
    if (!speedup.is_null()) {
      out << fmt::format("speedup vs {}: {:.2f}x\n", baseline.label(),
                         speedup["ratio"].get<double>());
    }
    out << fmt::format("flash {} / {} B, RAM {} / {} B: {}\n", fit.flash_needed,
                       fit.flash_available, fit.ram_needed, fit.ram_available,
                       fit.fits ? "fits" : "oversized (" + fit.reason + ")");
    print_warnings(env, err);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// ingest

int cmd_ingest(const std::string& log_path, const std::string& model_path,
               const std::string& csv_path, const std::string& format, std::ostream& out,
               std::ostream& err) {
  Envelope env("ingest");
  const auto records = parse_log(env.read(log_path));
  const auto model = parse_model(env.read(model_path));
  const auto report = empirical_delta(records, model);

  auto try_fit = [&](FitGrouping g, const char* what) -> json {
    try {
      return regression_json(fit_latency_energy(records, g));
    } catch (const DegenerateFitError& e) {
      env.warn(fmt::format("{} fit: {}", what, e.what()));
      return nullptr;
    }
  };
  const json layer_fit = try_fit(FitGrouping::per_layer, "per-layer");
  const json model_fit = try_fit(FitGrouping::per_model, "per-model");

  std::string csv = "mcu,config,layer_class,alignment,n,mean_delta_ns,min_delta_ns,max_delta_ns\n";
  json groups = json::array();
  for (const auto& g : report.groups) {
    csv += fmt::format("{},{},{},{},{},{},{},{}\n", g.mcu, g.config, to_string(g.layer_class),
                       to_string(g.alignment), g.n, g.mean_delta_ns, g.min_delta_ns,
                       g.max_delta_ns);
    groups.push_back({{"mcu", g.mcu},
                      {"config", g.config},
                      {"layer_class", std::string(to_string(g.layer_class))},
                      {"alignment", std::string(to_string(g.alignment))},
                      {"n", g.n},
                      {"mean_delta_ns", g.mean_delta_ns},
                      {"min_delta_ns", g.min_delta_ns},
                      {"max_delta_ns", g.max_delta_ns}});
  }
  if (!csv_path.empty()) write_file(csv_path, csv);

  if (want_json(format)) {
    out << env.dump({{"records", records.size()},
                     {"layer_samples", report.samples.size()},
                     {"delta_groups", groups},
                     {"fit_per_layer", layer_fit},
                     {"fit_per_model", model_fit}});
  } else {
    out << fmt::format("{} records, {} layer samples joined to model {}\n", records.size(),
                       report.samples.size(), model.name);
    Table table({"mcu", "config", "class", "align", "n", "mean ns/op", "min", "max"});
    for (const auto& g : report.groups) {
      table.add({g.mcu, g.config, std::string(to_string(g.layer_class)),
                 std::string(to_string(g.alignment)), std::to_string(g.n),
                 fmt::format("{:.2f}", g.mean_delta_ns), fmt::format("{:.2f}", g.min_delta_ns),
                 fmt::format("{:.2f}", g.max_delta_ns)});
    }
    table.print(out);
    auto show = [&](const char* name, const json& fit) {
      if (fit.is_null()) return;
      const double intercept = fit["intercept"].get<double>();
      out << fmt::format("{} energy = {:.6g} * latency {} {:.6g}  (r = {:.6f}, n = {})\n", name,
                         fit["slope"].get<double>(), intercept < 0 ? '-' : '+',
                         std::abs(intercept), fit["pearson_r"].get<double>(),
                         fit["n"].get<std::size_t>());
    };
    show("per-layer:", layer_fit);
    show("per-model:", model_fit);
    print_warnings(env, err);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// pareto

std::vector<ParetoPoint> points_from_input(Envelope& env, const std::string& path) {
  const auto text = env.read(path);
  const auto first = text.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      const auto offset = e.byte > 0 ? e.byte - 1 : 0;
      throw ParseError(fmt::format("{}: {}", path, e.what()), offset);
    }
    std::vector<ParetoPoint> points;
    if (doc.is_object() && doc.value("subcommand", "") == "estimate") {
      const auto& p = doc.at("payload");
      points.push_back({p.at("profile").get<std::string>() + "/" + p.at("config").get<std::string>(),
                        p.at("total_latency_ms").get<double>(),
                        p.at("total_energy_mj").get<double>()});
    } else if (doc.is_array()) {
      for (const auto& p : doc) {
        points.push_back({p.at("label").get<std::string>(), p.at("latency_ms").get<double>(),
                          p.at("energy_mj").get<double>()});
      }
    } else {
      throw Error(fmt::format("{}: expected an estimate envelope or a point array", path));
    }
    return points;
  }
  return points_from_log(parse_log(text));
}

int cmd_pareto(const std::vector<std::string>& inputs, const std::string& csv_path,
               const std::string& format, std::ostream& out) {
  Envelope env("pareto");
  std::vector<ParetoPoint> points;
  for (const auto& path : inputs) {
    auto p = points_from_input(env, path);
    points.insert(points.end(), p.begin(), p.end());
  }
  for (const auto& p : points) {
    if (!(p.latency_ms > 0.0) || !(p.energy_mj > 0.0)) {
      throw Error(fmt::format("point '{}' must have positive latency and energy", p.label));
    }
  }
  if (points.empty()) throw Error("no points to compare");
  const auto front = pareto_front(points);
  auto on_front = [&](const ParetoPoint& p) {
    return std::find(front.begin(), front.end(), p) != front.end();
  };

  std::string csv = "label,latency_ms,energy_mj,on_front\n";
  json all = json::array();
  for (const auto& p : points) {
    csv += fmt::format("{},{},{},{:d}\n", p.label, p.latency_ms, p.energy_mj,
                       static_cast<int>(on_front(p)));
    all.push_back({{"label", p.label},
                   {"latency_ms", p.latency_ms},
                   {"energy_mj", p.energy_mj},
                   {"on_front", on_front(p)}});
  }
  if (!csv_path.empty()) write_file(csv_path, csv);

  if (want_json(format)) {
    json f = json::array();
    for (const auto& p : front) f.push_back(p.label);
    out << env.dump({{"points", all}, {"front", f}});
  } else {
    Table table({"label", "latency ms", "energy mJ", "front"});
    for (const auto& p : points) {
      table.add({p.label, fmt::format("{:.3f}", p.latency_ms), fmt::format("{:.4f}", p.energy_mj),
                 on_front(p) ? "*" : ""});
    }
    table.print(out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// calibrate

int cmd_calibrate(const std::string& log_path, const std::string& model_path,
                  const std::string& profile_name, const std::string& output,
                  const std::string& format, std::ostream& out, std::ostream& err) {
  Envelope env("calibrate");
  const auto records = parse_log(env.read(log_path));
  const auto model = parse_model(env.read(model_path));
  const auto profile = resolve_profile(profile_name, profile_search_dirs());
  CalibrationResult result;
  try {
    result = calibrate(records, model, profile);
  } catch (const CoverageError& e) {
    std::string cells;
    for (const auto& c : e.missing_cells()) cells += (cells.empty() ? "" : ", ") + c;
    throw Error(fmt::format("{}: {}", e.what(), cells));
  }
  write_file(output, serialize_profile(result.profile));
  for (const auto& c : result.report.unfit_cells) env.warn("not calibrated: " + c);
  if (result.report.power_fit && result.report.power_fit->intercept != 0.0) {
    env.warn(fmt::format("latency/energy intercept {:.6g} mJ is not represented in the profile",
                         result.report.power_fit->intercept));
  }

  if (want_json(format)) {
    json cells = json::array();
    for (const auto& c : result.report.cells) {
      cells.push_back({{"name", c.name},
                       {"fitted", c.fitted},
                       {"samples", c.samples},
                       {"previous", c.previous},
                       {"value", c.value}});
    }
    out << env.dump(
        {{"output", output},
         {"profile", result.profile.name},
         {"cells", cells},
         {"power_fit",
          result.report.power_fit ? regression_json(*result.report.power_fit) : json(nullptr)},
         {"mape_percent", result.report.mape_percent}});
  } else {
    Table table({"cell", "fitted", "n", "previous", "calibrated"});
    for (const auto& c : result.report.cells) {
      table.add({c.name, c.fitted ? "yes" : "no", std::to_string(c.samples),
                 fmt::format("{:.4f}", c.previous), fmt::format("{:.4f}", c.value)});
    }
    table.print(out);
    out << fmt::format("in-sample MAPE: {:.3f}%\nwrote {}\n", result.report.mape_percent, output);
    print_warnings(env, err);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const std::string& family_name, std::int64_t from, std::int64_t to,
              std::int64_t step, const std::string& dir, const std::string& format,
              std::ostream& out) {
  const auto family = sweep_family_from_string(family_name);
  if (!family) throw Error(fmt::format("unknown family '{}'", family_name));
  SweepSpec spec{*family, from, to, step, std::nullopt};
  const auto entries = generate(spec);
  fs::create_directories(dir);
  for (const auto& e : entries) save_model(e.model, fs::path(dir) / sweep_file_name(*family, e.y));
  const auto manifest = manifest_csv(entries, *family);
  write_file(fs::path(dir) / "manifest.csv", manifest);

  if (want_json(format)) {
    Envelope env("sweep");
    json rows = json::array();
    for (const auto& e : entries) {
      rows.push_back({{"y", e.y},
                      {"maccs", e.maccs},
                      {"alignment", std::string(to_string(e.alignment))},
                      {"file", sweep_file_name(*family, e.y)}});
    }
    out << env.dump({{"family", family_name}, {"directory", dir}, {"models", rows}});
  } else {
    out << fmt::format("wrote {} models and manifest.csv to {}\n", entries.size(), dir);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// lint

int cmd_lint(const std::string& model_path, const std::string& profile_name,
             const std::string& format, std::ostream& out) {
  Envelope env("lint");
  const auto model = parse_model(env.read(model_path));
  std::optional<HardwareProfile> profile;
  if (!profile_name.empty()) profile = resolve_profile(profile_name, profile_search_dirs());
  const auto findings = lint_model(model, profile);
  bool warned = false;
  for (const auto& f : findings) warned = warned || f.severity == Severity::warn;

  if (want_json(format)) {
    json rows = json::array();
    for (const auto& f : findings) {
      rows.push_back({{"rule_id", f.rule_id},
                      {"layer_index", f.layer_index},
                      {"severity", std::string(to_string(f.severity))},
                      {"message", f.message},
                      {"estimated_gain", f.estimated_gain ? json(*f.estimated_gain) : json(nullptr)},
                      {"suggested", f.suggested ? json(*f.suggested) : json(nullptr)}});
    }
    out << env.dump({{"model", model.name},
                     {"profile", profile ? json(profile->name) : json(nullptr)},
                     {"findings", rows}});
  } else {
    if (findings.empty()) out << "no findings\n";
    for (const auto& f : findings) {
      const auto where = f.layer_index == kModelLevel ? std::string("model")
                                                      : fmt::format("layer {}", f.layer_index);
      out << fmt::format("{} {} [{}] {}\n", to_string(f.severity), f.rule_id, where, f.message);
    }
  }
  return warned ? kExitWarnings : kExitOk;
}

// ---------------------------------------------------------------------------
// profiles

int cmd_profiles(const std::string& show, const std::string& format, std::ostream& out) {
  if (!show.empty()) {
    out << serialize_profile(resolve_profile(show, profile_search_dirs()));
    return kExitOk;
  }
  std::vector<HardwareProfile> profiles = builtin_profiles();
  for (const auto& dir : profile_search_dirs()) {
    if (!fs::is_directory(dir)) continue;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) profiles.push_back(load_profile(f));
  }
  if (want_json(format)) {
    Envelope env("profiles");
    json rows = json::array();
    for (const auto& p : profiles) rows.push_back(json::parse(serialize_profile(p)));
    out << env.dump({{"profiles", rows}});
  } else {
    Table table({"name", "MHz", "flash KiB", "RAM KiB", "FPU", "power mW", "calibrated"});
    for (const auto& p : profiles) {
      table.add({p.name, fmt::format("{:g}", p.clock_mhz), std::to_string(p.flash_bytes / 1024),
                 std::to_string(p.ram_bytes / 1024), p.has_fpu ? "yes" : "no",
                 fmt::format("{:g}", p.avg_power_mw), p.calibrated ? "yes" : "no"});
    }
    table.print(out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(const std::string& model_path, const std::string& profile_name,
              const std::string& configs, const std::string& mcu, int runs, double noise,
              std::uint64_t seed, const std::string& output, std::ostream& out,
              std::ostream& err) {
  const auto model = load_model(model_path);
  const auto profile = resolve_profile(profile_name, profile_search_dirs());
  SynthOptions options;
  options.mcu = mcu;
  options.runs = runs;
  options.noise = noise;
  options.seed = seed;
  std::string_view rest(configs);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    options.configs.push_back(OptimizationConfig::from_label(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  for (const auto& c : options.configs) {
    const auto fit = fit_check(model, profile, c);
    if (!fit.fits) {
      err << fmt::format("warning: {} with {} is oversized ({})\n", model.name, c.label(),
                         fit.reason);
    }
  }
  const auto text = write_log(synthesize_log(model, profile, options));
  if (output == "-") {
    out << text;
  } else {
    write_file(output, text);
  }
  return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"costlab: static cost analysis of neural networks for microcontrollers",
               "costlab"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string format = "table";
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
  };

  // analyze
  std::vector<std::string> analyze_files;
  std::uint64_t overhead = kDefaultTensorOverheadBytes;
  auto* analyze = app.add_subcommand("analyze", "Per-layer parameters, MACCs and FLOPs");
  analyze->add_option("models", analyze_files, "Model description files")->required();
  analyze->add_option("--overhead", overhead, "Bytes of metadata per parameter tensor")
      ->capture_default_str();
  add_format(analyze);

  // estimate
  std::string model_path;
  std::string profile_name;
  bool quantized = false;
  bool cmsis = false;
  int fpu_flag = 0;
  auto* est = app.add_subcommand("estimate", "Predict latency and energy on a hardware profile");
  est->add_option("model", model_path, "Model description file")->required();
  est->add_option("--profile", profile_name, "Builtin name (l4, f4, f7) or profile file")
      ->required();
  est->add_flag("--quantized", quantized, "8-bit weights and activations");
  est->add_flag("--cmsis", cmsis, "Optimized 8-bit kernels (requires --quantized)");
  auto* fpu_on = est->add_flag_callback(
      "--fpu", [&] { fpu_flag = 1; }, "Run float models with the FPU (default: profile)");
  est->add_flag_callback("--no-fpu", [&] { fpu_flag = -1; }, "Run float models without the FPU")
      ->excludes(fpu_on);
  add_format(est);

  // ingest
  std::string log_path;
  std::string csv_path;
  auto* ingest = app.add_subcommand("ingest", "Empirical latency per operation from a benchmark log");
  ingest->add_option("log", log_path, "Benchmark log (CSV)")->required();
  ingest->add_option("--model", model_path, "Model the log was measured on")->required();
  ingest->add_option("--csv", csv_path, "Write delta_by_alignment CSV here");
  add_format(ingest);

  // pareto
  std::vector<std::string> pareto_inputs;
  auto* pareto = app.add_subcommand("pareto", "Latency/energy Pareto front");
  pareto->add_option("inputs", pareto_inputs, "Benchmark logs or estimate JSON files")->required();
  pareto->add_option("--csv", csv_path, "Write plot-ready pareto CSV here");
  add_format(pareto);

  // calibrate
  std::string output;
  auto* cal = app.add_subcommand("calibrate", "Fit a hardware profile to a benchmark log");
  cal->add_option("log", log_path, "Benchmark log (CSV)")->required();
  cal->add_option("--model", model_path, "Model the log was measured on")->required();
  cal->add_option("--profile", profile_name, "Starting profile")->required();
  cal->add_option("-o,--output", output, "Calibrated profile file")->required();
  add_format(cal);

  // sweep
  std::string family;
  std::int64_t from = 1;
  std::int64_t to = 1;
  std::int64_t step = 1;
  auto* sweep = app.add_subcommand("sweep", "Generate a hyper-parameter sweep model family");
  sweep->add_option("--family", family, "dense | conv_filters | dwconv_channels")->required();
  sweep->add_option("--from", from, "First Y")->required();
  sweep->add_option("--to", to, "Last Y (inclusive)")->required();
  sweep->add_option("--step", step, "Y increment")->capture_default_str();
  sweep->add_option("-o,--output", output, "Output directory")->required();
  add_format(sweep);

  // lint
  auto* lint = app.add_subcommand("lint", "Check a model against hardware-aware design rules");
  lint->add_option("model", model_path, "Model description file")->required();
  lint->add_option("--profile", profile_name, "Hardware profile used to quantify findings");
  add_format(lint);

  // profiles
  std::string show;
  auto* profiles = app.add_subcommand("profiles", "List builtin and search-path profiles");
  profiles->add_option("--show", show, "Print one profile as JSON");
  add_format(profiles);

  // synth
  std::string configs = "U,U+FPU,Q,Q+CMSIS";
  std::string mcu;
  int runs = 3;
  double noise = 0.0;
  std::uint64_t seed = 0;
  auto* synth = app.add_subcommand("synth", "Synthesize a benchmark log from a profile");
  synth->add_option("--model", model_path, "Model description file")->required();
  synth->add_option("--profile", profile_name, "Generating profile")->required();
  synth->add_option("--configs", configs, "Comma-separated U, U+FPU, Q, Q+CMSIS")
      ->capture_default_str();
  synth->add_option("--mcu", mcu, "MCU label (default: profile name)");
  synth->add_option("--runs", runs, "Repetitions per config")->capture_default_str();
  synth->add_option("--noise", noise, "Relative Gaussian noise")->capture_default_str();
  synth->add_option("--seed", seed, "Noise seed")->capture_default_str();
  synth->add_option("-o,--output", output, "Output log ('-' for stdout)")->required();

  if (args.size() > 1 && !args[1].empty() && args[1][0] != '-' &&
      app.get_subcommand_no_throw(args[1]) == nullptr) {
    err << fmt::format("error: unknown subcommand '{}'\n", args[1]) << app.help();
    return kExitError;
  }

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    if (e.get_name() == "ExtrasError" || e.get_name() == "RequiredError") {
      err << app.help();
    }
    return kExitError;
  }

  try {
    if (*analyze) return cmd_analyze(analyze_files, overhead, format, out);
    if (*est) {
      return cmd_estimate(model_path, profile_name, quantized, cmsis, fpu_flag, format, out, err);
    }
    if (*ingest) return cmd_ingest(log_path, model_path, csv_path, format, out, err);
    if (*pareto) return cmd_pareto(pareto_inputs, csv_path, format, out);
    if (*cal) return cmd_calibrate(log_path, model_path, profile_name, output, format, out, err);
    if (*sweep) return cmd_sweep(family, from, to, step, output, format, out);
    if (*lint) return cmd_lint(model_path, profile_name, format, out);
    if (*profiles) return cmd_profiles(show, format, out);
    if (*synth) {
      return cmd_synth(model_path, profile_name, configs, mcu, runs, noise, seed, output, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  err << app.help();
  return kExitError;
}

}  // namespace costlab::cli
