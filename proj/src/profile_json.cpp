// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "costlab/error.hpp"
#include "costlab/hwmodel.hpp"

namespace costlab {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw ParseError("profile: " + what, 0); }

const json& field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) bad(fmt::format("missing field '{}'", key));
  return *it;
}

double number(const json& doc, const char* key) {
  const auto& v = field(doc, key);
  if (!v.is_number()) bad(fmt::format("'{}' must be a number", key));
  return v.get<double>();
}

std::uint64_t count(const json& doc, const char* key) {
  const auto& v = field(doc, key);
  if (!v.is_number_unsigned()) bad(fmt::format("'{}' must be a non-negative integer", key));
  return v.get<std::uint64_t>();
}

LayerClass class_key(const std::string& key) {
  auto cls = layer_class_from_string(key);
  if (!cls) bad(fmt::format("unknown layer class '{}'", key));
  return *cls;
}

}  // namespace

HardwareProfile parse_profile(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto offset = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError(fmt::format("profile syntax error at byte {}: {}", offset, e.what()),
                     offset);
  }
  if (!doc.is_object()) bad("expected an object");
  static const char* const kKnown[] = {
      "name",          "description",      "clock_mhz",         "flash_bytes",
      "ram_bytes",     "has_fpu",          "delta_nc",          "gain",
      "fpu_off_penalty", "float_vs_q_factor", "avg_power_mw",   "code_size_bytes",
      "calibrated"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      bad(fmt::format("unknown field '{}'", key));
    }
  }

  HardwareProfile p;
  const auto& name = field(doc, "name");
  if (!name.is_string()) bad("'name' must be a string");
  p.name = name.get<std::string>();
  if (doc.contains("description")) p.description = doc["description"].get<std::string>();
  p.clock_mhz = number(doc, "clock_mhz");
  p.flash_bytes = count(doc, "flash_bytes");
  p.ram_bytes = count(doc, "ram_bytes");
  const auto& fpu = field(doc, "has_fpu");
  if (!fpu.is_boolean()) bad("'has_fpu' must be a boolean");
  p.has_fpu = fpu.get<bool>();

  const auto& deltas = field(doc, "delta_nc");
  if (!deltas.is_object()) bad("'delta_nc' must be an object");
  for (const auto& [key, value] : deltas.items()) {
    if (!value.is_number()) bad(fmt::format("delta_nc.{} must be a number", key));
    p.delta_nc[class_key(key)] = value.get<double>();
  }
  const auto& gains = field(doc, "gain");
  if (!gains.is_object()) bad("'gain' must be an object");
  for (const auto& [key, row] : gains.items()) {
    if (!row.is_object()) bad(fmt::format("gain.{} must be an object", key));
    GainRow g;
    for (auto a : kAlignmentClasses) {
      const auto name_a = std::string(to_string(a));
      if (!row.contains(name_a) || !row[name_a].is_number()) {
        bad(fmt::format("gain.{}.{} must be a number", key, name_a));
      }
      g.at(a) = row[name_a].get<double>();
    }
    if (row.size() != 3) bad(fmt::format("gain.{} has unknown fields", key));
    p.gain[class_key(key)] = g;
  }
  p.fpu_off_penalty = number(doc, "fpu_off_penalty");
  p.float_vs_q_factor = number(doc, "float_vs_q_factor");
  p.avg_power_mw = number(doc, "avg_power_mw");
  p.code_size_bytes = count(doc, "code_size_bytes");
  if (doc.contains("calibrated")) {
    if (!doc["calibrated"].is_boolean()) bad("'calibrated' must be a boolean");
    p.calibrated = doc["calibrated"].get<bool>();
  }
  validate(p);
  return p;
}

std::string serialize_profile(const HardwareProfile& p) {
  validate(p);
  json doc;
  doc["name"] = p.name;
  doc["description"] = p.description;
  doc["clock_mhz"] = p.clock_mhz;
  doc["flash_bytes"] = p.flash_bytes;
  doc["ram_bytes"] = p.ram_bytes;
  doc["has_fpu"] = p.has_fpu;
  doc["delta_nc"] = json::object();
  for (const auto& [cls, delta] : p.delta_nc) doc["delta_nc"][std::string(to_string(cls))] = delta;
  doc["gain"] = json::object();
  for (const auto& [cls, g] : p.gain) {
    doc["gain"][std::string(to_string(cls))] = {{"odd", g.odd}, {"even", g.even}, {"div4", g.div4}};
  }
  doc["fpu_off_penalty"] = p.fpu_off_penalty;
  doc["float_vs_q_factor"] = p.float_vs_q_factor;
  doc["avg_power_mw"] = p.avg_power_mw;
  doc["code_size_bytes"] = p.code_size_bytes;
  doc["calibrated"] = p.calibrated;
  return doc.dump(2) + "\n";
}

HardwareProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open profile '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_profile(ss.str());
}

}  // namespace costlab
