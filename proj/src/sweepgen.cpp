// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "costlab/sweepgen.hpp"

#include <fmt/format.h>

#include "costlab/error.hpp"
#include "costlab/opcount.hpp"

namespace costlab {
namespace {

Conv2D conv(std::int64_t k, std::int64_t filters, std::int64_t stride = 1, std::int64_t pad = 0) {
  return Conv2D{{k, k}, {stride, stride}, {pad, pad}, filters};
}

DepthwiseConv2D dwconv(std::int64_t k, std::int64_t pad) {
  return DepthwiseConv2D{{k, k}, {1, 1}, {pad, pad}};
}

Pool max_pool(std::int64_t k) { return Pool{{k, k}, {k, k}, PoolKind::max}; }

const Activation kRelu{ActivationKind::relu};
const Activation kSoftmax{ActivationKind::softmax};

void set_slot(ModelSpec& model, const SweepSlot& slot, std::int64_t y) {
  auto wrong_slot = [&](const char* expected) {
    throw Error(fmt::format("sweep slot layer {} is not a {} layer", slot.layer, expected));
  };
  if (slot.field == SlotField::input_channels) {
    model.input.channels = y;
    return;
  }
  if (slot.layer >= model.layers.size()) {
    throw Error(fmt::format("sweep slot layer {} out of range", slot.layer));
  }
  auto& layer = model.layers[slot.layer];
  if (slot.field == SlotField::units) {
    auto* dense = std::get_if<Dense>(&layer);
    if (!dense) wrong_slot("dense");
    dense->units = y;
  } else {
    auto* c = std::get_if<Conv2D>(&layer);
    if (!c) wrong_slot("conv2d");
    c->filters = y;
  }
}

}  // namespace

std::string_view to_string(SweepFamily family) {
  switch (family) {
    case SweepFamily::dense:
      return "dense";
    case SweepFamily::conv_filters:
      return "conv_filters";
    case SweepFamily::dwconv_channels:
      return "dwconv_channels";
  }
  return "dense";
}

std::optional<SweepFamily> sweep_family_from_string(std::string_view s) {
  for (auto f : {SweepFamily::dense, SweepFamily::conv_filters, SweepFamily::dwconv_channels}) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

SweepTemplate default_template(SweepFamily family) {
  SweepTemplate t;
  t.base.weight_bits = 8;
  t.base.metadata["family"] = std::string(to_string(family));
  switch (family) {
    case SweepFamily::dense:
      t.base.name = "sweep_dense";
      t.base.input = {1, 1, 8};
      t.base.layers = {Dense{1}, Dense{64}, Flatten{}, Dense{10}};
      t.slot = {SlotField::units, 0};
      t.benchmarked_layer = 1;
      break;
    case SweepFamily::conv_filters:
      t.base.name = "sweep_conv_filters";
      t.base.input = {16, 16, 3};
      t.base.layers = {conv(3, 1, 1, 1), conv(3, 16, 1, 1), Flatten{}, Dense{10}};
      t.slot = {SlotField::filters, 0};
      t.benchmarked_layer = 1;
      break;
    case SweepFamily::dwconv_channels:
      t.base.name = "sweep_dwconv_channels";
      t.base.input = {16, 16, 1};
      t.base.layers = {dwconv(3, 1), Flatten{}, Dense{10}};
      t.slot = {SlotField::input_channels, 0};
      t.benchmarked_layer = 0;
      break;
  }
  return t;
}

std::vector<SweepEntry> generate(const SweepSpec& spec) {
  if (spec.step < 1) throw Error("sweep step must be >= 1");
  if (spec.from > spec.to) throw Error("sweep range is empty (from > to)");
  const SweepTemplate tmpl = spec.base ? *spec.base : default_template(spec.family);
  if (tmpl.benchmarked_layer >= tmpl.base.layers.size() ||
      !is_compute(tmpl.base.layers[tmpl.benchmarked_layer])) {
    throw Error("sweep template must mark a compute layer as benchmarked");
  }

  std::vector<SweepEntry> entries;
  for (std::int64_t y = spec.from; y <= spec.to; y += spec.step) {
    SweepEntry entry;
    entry.y = y;
    entry.model = tmpl.base;
    set_slot(entry.model, tmpl.slot, y);
    try {
      validate(entry.model);
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("Y={}: {}", y, e.what()), e.layer_index(), e.rule());
    }
    const auto shapes = infer_shapes(entry.model);
    const auto& layer = entry.model.layers[tmpl.benchmarked_layer];
    const auto& input = shapes[tmpl.benchmarked_layer];
    entry.maccs = count_layer(layer, input).maccs;
    entry.alignment = classify_alignment(alignment_driver(layer, input));
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string sweep_file_name(SweepFamily family, std::int64_t y) {
  return fmt::format("{}_y{:04d}.json", to_string(family), y);
}

std::string manifest_csv(const std::vector<SweepEntry>& entries, SweepFamily family) {
  std::string out = "y,maccs,alignment,file\n";
  for (const auto& e : entries) {
    out += fmt::format("{},{},{},{}\n", e.y, e.maccs, to_string(e.alignment),
                       sweep_file_name(family, e.y));
  }
  return out;
}

// Fixture dimensions were chosen once so that the aggregate parameter and
// MACC counts match the reference measurements (see README, "Fixtures"):
// LeNet ~320 KiB of float32 parameters, ResNet-20 ~3.4x its parameters and
// ~141x its MACCs.
Fixtures fixtures() {
  Fixtures f;

  auto& lenet = f.lenet;
  lenet.name = "lenet";
  lenet.input = {28, 28, 1};
  lenet.weight_bits = 32;
  lenet.metadata = {{"accuracy_float", "98.79%"},
                    {"accuracy_int8", "98.74%"},
                    {"source", "LeNet-5 topology, widened first dense layer"}};
  lenet.layers = {conv(5, 6),   kRelu, max_pool(2), conv(5, 16), kRelu, max_pool(2), Flatten{},
                  Dense{232},   kRelu, Dense{84},   kRelu,       Dense{10}, kSoftmax};

  auto& resnet = f.resnet20;
  resnet.name = "resnet20";
  resnet.input = {32, 32, 3};
  resnet.weight_bits = 32;
  resnet.metadata = {{"source", "ResNet-20 main path; identity shortcuts carry no parameters"}};
  resnet.layers = {conv(3, 16, 1, 1), kRelu};
  const std::int64_t widths[] = {16, 32, 64};
  for (int stage = 0; stage < 3; ++stage) {
    for (int i = 0; i < 6; ++i) {
      const std::int64_t stride = (stage > 0 && i == 0) ? 2 : 1;
      resnet.layers.push_back(conv(3, widths[stage], stride, 1));
      resnet.layers.push_back(kRelu);
    }
  }
  resnet.layers.push_back(Pool{{8, 8}, {8, 8}, PoolKind::avg});
  resnet.layers.push_back(Flatten{});
  resnet.layers.push_back(Dense{10});
  resnet.layers.push_back(kSoftmax);
  return f;
}

ModelSpec calibration_probe() {
  ModelSpec m;
  m.name = "calibration_probe";
  m.input = {8, 8, 3};
  m.weight_bits = 8;
  m.layers = {
      conv(3, 6, 1, 1),  // C_in 3
      conv(3, 8, 1, 1),  // 6
      conv(3, 5, 1, 1),  // 8
      conv(1, 6),        // 5
      conv(1, 4),        // 6
      conv(1, 7),        // 4
      dwconv(3, 1),      // 7
      conv(1, 6),        // 7
      dwconv(3, 1),      // 6
      conv(1, 8),        // 6
      dwconv(3, 1),      // 8
      Flatten{},
      Dense{9},   // N_in 512
      Dense{6},   // 9
      Dense{10},  // 6
  };
  return m;
}

}  // namespace costlab
