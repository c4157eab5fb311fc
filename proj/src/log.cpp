// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "costlab/error.hpp"
#include "costlab/measurelab.hpp"

namespace costlab {
namespace {

[[noreturn]] void bad_line(std::size_t line, const std::string& what) {
  throw ParseError(fmt::format("log line {}: {}", line, what), 0, line);
}

std::vector<std::string_view> split(std::string_view row) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = row.find(',', start);
    fields.push_back(row.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool parse_bool(std::string_view s, std::size_t line, const char* column) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  bad_line(line, fmt::format("{} must be 0/1/true/false, got '{}'", column, s));
}

double parse_double(std::string_view s, std::size_t line, const char* column) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    bad_line(line, fmt::format("{} is not a number: '{}'", column, s));
  }
  return v;
}

}  // namespace

std::vector<MeasurementRecord> parse_log(std::string_view text) {
  std::vector<MeasurementRecord> records;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view row = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    if (line_no == 1 && row.starts_with("\xEF\xBB\xBF")) row.remove_prefix(3);
    if (row.empty()) continue;
    if (!header_seen) {
      if (row != kLogHeader) bad_line(line_no, fmt::format("expected header '{}'", kLogHeader));
      header_seen = true;
      continue;
    }

    const auto f = split(row);
    if (f.size() != 9) bad_line(line_no, fmt::format("expected 9 columns, got {}", f.size()));
    MeasurementRecord r;
    r.run_id = std::string(f[0]);
    r.mcu = std::string(f[1]);
    r.config.quantized = parse_bool(f[2], line_no, "quantized");
    r.config.cmsis = parse_bool(f[3], line_no, "cmsis");
    r.config.fpu_enabled = parse_bool(f[4], line_no, "fpu");
    if (r.config.cmsis && !r.config.quantized) bad_line(line_no, "cmsis requires quantized");

    if (f[5] == "total") {
      if (f[6] != "model") bad_line(line_no, "total rows must have layer_class 'model'");
    } else {
      std::int64_t index = 0;
      auto [ptr, ec] = std::from_chars(f[5].data(), f[5].data() + f[5].size(), index);
      if (ec != std::errc{} || ptr != f[5].data() + f[5].size() || index < 0) {
        bad_line(line_no, fmt::format("layer_index must be a non-negative integer or 'total', got '{}'",
                                      f[5]));
      }
      r.layer_index = index;
      r.layer_class = layer_class_from_string(f[6]);
      if (!r.layer_class) bad_line(line_no, fmt::format("unknown layer_class '{}'", f[6]));
    }
    r.latency_ms = parse_double(f[7], line_no, "latency_ms");
    r.energy_mj = parse_double(f[8], line_no, "energy_mj");
    if (!(r.latency_ms > 0.0)) bad_line(line_no, "latency_ms must be positive");
    if (r.energy_mj < 0.0) bad_line(line_no, "energy_mj must be non-negative");
    records.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError("log is empty (missing header)", 0, 1);
  return records;
}

std::vector<MeasurementRecord> load_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open log '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_log(ss.str());
}

std::string write_log(std::span<const MeasurementRecord> records) {
  std::string out(kLogHeader);
  out += '\n';
  for (const auto& r : records) {
    out += fmt::format("{},{},{:d},{:d},{:d},{},{},{},{}\n", r.run_id, r.mcu,
                       static_cast<int>(r.config.quantized), static_cast<int>(r.config.cmsis),
                       static_cast<int>(r.config.fpu_enabled),
                       r.layer_index ? std::to_string(*r.layer_index) : std::string("total"),
                       r.layer_class ? std::string(to_string(*r.layer_class)) : std::string("model"),
                       r.latency_ms, r.energy_mj);
  }
  return out;
}

}  // namespace costlab
