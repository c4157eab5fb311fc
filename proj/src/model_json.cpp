// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

// JSON model description format.
//
//   {
//     "name": "lenet",
//     "input": {"h": 28, "w": 28, "c": 1},
//     "weight_bits": 32,                      (optional, default 32)
//     "metadata": {"accuracy": "98.79%"},     (optional, string values)
//     "layers": [
//       {"type": "conv2d", "kernel": [5, 5], "stride": [1, 1], "padding": [0, 0], "filters": 6},
//       {"type": "dw_conv2d", "kernel": 3, "padding": 1},
//       {"type": "pool", "kind": "max", "kernel": [2, 2], "stride": [2, 2]},
//       {"type": "activation", "kind": "relu"},
//       {"type": "flatten"},
//       {"type": "dense", "units": 10}
//     ]
//   }
//
// Pairs are written [x, y] (width first). A bare integer sets both
// dimensions. Stride defaults to 1 (pool: to the kernel), padding to 0.
// Unknown fields anywhere are rejected.

#include <fmt/format.h>

#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>

#include "costlab/error.hpp"
#include "costlab/model.hpp"
#include "overloaded.hpp"

namespace costlab {
namespace {

using nlohmann::json;
using detail::Overloaded;

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw ParseError(fmt::format("{}: {}", where, what), 0);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) schema_error(where, fmt::format("unknown field '{}'", key));
  }
}

std::int64_t get_int(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, fmt::format("missing field '{}'", key));
  if (!it->is_number_integer()) schema_error(where, fmt::format("'{}' must be an integer", key));
  return it->get<std::int64_t>();
}

Dim2 get_dim2(const json& obj, const char* key, const std::string& where, Dim2 fallback,
              bool required) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) schema_error(where, fmt::format("missing field '{}'", key));
    return fallback;
  }
  if (it->is_number_integer()) {
    auto v = it->get<std::int64_t>();
    return Dim2{v, v};
  }
  if (it->is_array() && it->size() == 2 && (*it)[0].is_number_integer() &&
      (*it)[1].is_number_integer()) {
    return Dim2{(*it)[0].get<std::int64_t>(), (*it)[1].get<std::int64_t>()};
  }
  schema_error(where, fmt::format("'{}' must be an integer or [x, y]", key));
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, fmt::format("missing field '{}'", key));
  if (!it->is_string()) schema_error(where, fmt::format("'{}' must be a string", key));
  return it->get<std::string>();
}

LayerSpec parse_layer(const json& j, std::size_t index) {
  const std::string where = fmt::format("layers[{}]", index);
  if (!j.is_object()) schema_error(where, "expected an object");
  const std::string type = get_string(j, "type", where);
  if (type == "dense") {
    reject_unknown(j, where, {"type", "units"});
    return Dense{get_int(j, "units", where)};
  }
  if (type == "conv2d") {
    reject_unknown(j, where, {"type", "kernel", "stride", "padding", "filters"});
    return Conv2D{get_dim2(j, "kernel", where, {}, true), get_dim2(j, "stride", where, {1, 1}, false),
                  get_dim2(j, "padding", where, {0, 0}, false), get_int(j, "filters", where)};
  }
  if (type == "dw_conv2d") {
    reject_unknown(j, where, {"type", "kernel", "stride", "padding"});
    return DepthwiseConv2D{get_dim2(j, "kernel", where, {}, true),
                           get_dim2(j, "stride", where, {1, 1}, false),
                           get_dim2(j, "padding", where, {0, 0}, false)};
  }
  if (type == "pool") {
    reject_unknown(j, where, {"type", "kernel", "stride", "kind"});
    Pool p;
    p.kernel = get_dim2(j, "kernel", where, {}, true);
    p.stride = get_dim2(j, "stride", where, p.kernel, false);
    const auto kind = j.contains("kind") ? get_string(j, "kind", where) : std::string{"max"};
    if (kind == "max") {
      p.kind = PoolKind::max;
    } else if (kind == "avg") {
      p.kind = PoolKind::avg;
    } else {
      schema_error(where, fmt::format("unknown pool kind '{}'", kind));
    }
    return p;
  }
  if (type == "flatten") {
    reject_unknown(j, where, {"type"});
    return Flatten{};
  }
  if (type == "activation") {
    reject_unknown(j, where, {"type", "kind"});
    const auto kind = get_string(j, "kind", where);
    if (kind == "relu") return Activation{ActivationKind::relu};
    if (kind == "softmax") return Activation{ActivationKind::softmax};
    if (kind == "tanh") return Activation{ActivationKind::tanh};
    if (kind == "sigmoid") return Activation{ActivationKind::sigmoid};
    schema_error(where, fmt::format("unknown activation kind '{}'", kind));
  }
  schema_error(where, fmt::format("unknown layer type '{}'", type));
}

json dim2_json(const Dim2& d) { return json::array({d.x, d.y}); }

const char* kind_name(PoolKind k) { return k == PoolKind::max ? "max" : "avg"; }

const char* kind_name(ActivationKind k) {
  switch (k) {
    case ActivationKind::relu:
      return "relu";
    case ActivationKind::softmax:
      return "softmax";
    case ActivationKind::tanh:
      return "tanh";
    case ActivationKind::sigmoid:
      return "sigmoid";
  }
  return "relu";
}

json layer_json(const LayerSpec& layer) {
  json j = json::object();
  j["type"] = std::string(layer_type_name(layer));
  std::visit(Overloaded{
                 [&](const Dense& d) { j["units"] = d.units; },
                 [&](const Conv2D& c) {
                   j["kernel"] = dim2_json(c.kernel);
                   j["stride"] = dim2_json(c.stride);
                   j["padding"] = dim2_json(c.padding);
                   j["filters"] = c.filters;
                 },
                 [&](const DepthwiseConv2D& c) {
                   j["kernel"] = dim2_json(c.kernel);
                   j["stride"] = dim2_json(c.stride);
                   j["padding"] = dim2_json(c.padding);
                 },
                 [&](const Pool& p) {
                   j["kind"] = kind_name(p.kind);
                   j["kernel"] = dim2_json(p.kernel);
                   j["stride"] = dim2_json(p.stride);
                 },
                 [&](const Flatten&) {},
                 [&](const Activation& a) { j["kind"] = kind_name(a.kind); },
             },
             layer);
  return j;
}

}  // namespace

ModelSpec parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto offset = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError(fmt::format("syntax error at byte {}: {}", offset, e.what()), offset);
  }
  reject_unknown(doc, "model", {"name", "input", "weight_bits", "layers", "metadata"});

  ModelSpec model;
  model.name = get_string(doc, "name", "model");
  if (!doc.contains("input")) schema_error("model", "missing field 'input'");
  const auto& in = doc["input"];
  reject_unknown(in, "input", {"h", "w", "c"});
  model.input = TensorShape{get_int(in, "h", "input"), get_int(in, "w", "input"),
                            get_int(in, "c", "input")};
  if (doc.contains("weight_bits")) {
    model.weight_bits = static_cast<int>(get_int(doc, "weight_bits", "model"));
  }
  if (doc.contains("metadata")) {
    const auto& meta = doc["metadata"];
    if (!meta.is_object()) schema_error("metadata", "expected an object");
    for (const auto& [key, value] : meta.items()) {
      if (!value.is_string()) schema_error("metadata", fmt::format("'{}' must be a string", key));
      model.metadata.emplace(key, value.get<std::string>());
    }
  }
  if (!doc.contains("layers") || !doc["layers"].is_array()) {
    schema_error("model", "'layers' must be an array");
  }
  std::size_t index = 0;
  for (const auto& layer : doc["layers"]) model.layers.push_back(parse_layer(layer, index++));

  validate(model);
  return model;
}

std::string serialize_model(const ModelSpec& model) {
  validate(model);
  json doc = json::object();
  doc["name"] = model.name;
  doc["input"] = {{"h", model.input.height}, {"w", model.input.width}, {"c", model.input.channels}};
  doc["weight_bits"] = model.weight_bits;
  doc["metadata"] = json::object();
  for (const auto& [k, v] : model.metadata) doc["metadata"][k] = v;
  doc["layers"] = json::array();
  for (const auto& layer : model.layers) doc["layers"].push_back(layer_json(layer));
  return doc.dump(2) + "\n";
}

ModelSpec load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open model file '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

void save_model(const ModelSpec& model, const std::filesystem::path& path) {
  const auto text = serialize_model(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write model file '{}'", path.string()));
  out << text;
}

}  // namespace costlab
