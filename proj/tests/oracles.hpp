// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

// Independent reference implementations used by the tests. Nothing here
// calls into the closed-form counters it is checked against.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "costlab/measurelab.hpp"

namespace costlab::oracle {

struct Tally {
  std::uint64_t flops = 0;
  std::uint64_t maccs = 0;
};

// Window start offsets along one axis, walking the padded input.
inline std::vector<std::int64_t> window_starts(std::int64_t in, std::int64_t k, std::int64_t s,
                                               std::int64_t p) {
  std::vector<std::int64_t> starts;
  for (std::int64_t start = -p; start + k <= in + p; start += s) starts.push_back(start);
  return starts;
}

// Walks every output element and every input channel feeding it. For one
// (output, input channel) pair the reduction over the window costs K
// multiplies and K-1 adds, one add folds the partial sum into the output
// accumulator, and the bias term costs one more add. One MACC is tallied per
// weight application and one per bias term.
inline Tally conv_loop_nest(std::int64_t ih, std::int64_t iw, std::int64_t c_in, std::int64_t kh,
                            std::int64_t kw, std::int64_t sh, std::int64_t sw, std::int64_t ph,
                            std::int64_t pw, std::int64_t c_out) {
  Tally t;
  for (auto y0 : window_starts(ih, kh, sh, ph)) {
    for (auto x0 : window_starts(iw, kw, sw, pw)) {
      for (std::int64_t co = 0; co < c_out; ++co) {
        for (std::int64_t ci = 0; ci < c_in; ++ci) {
          std::uint64_t products = 0;
          for (std::int64_t dy = 0; dy < kh; ++dy) {
            for (std::int64_t dx = 0; dx < kw; ++dx) {
              (void)(y0 + dy);
              (void)(x0 + dx);
              ++products;
              ++t.maccs;
            }
          }
          t.flops += products;      // multiplies
          t.flops += products - 1;  // window reduction adds
          t.flops += 1;             // accumulate into the output
          t.flops += 1;             // bias add
          t.maccs += 1;             // bias
        }
      }
    }
  }
  return t;
}

// Depthwise: each input channel is convolved with its own filter.
inline Tally dw_loop_nest(std::int64_t ih, std::int64_t iw, std::int64_t c, std::int64_t kh,
                          std::int64_t kw, std::int64_t sh, std::int64_t sw, std::int64_t ph,
                          std::int64_t pw) {
  Tally t;
  for (std::int64_t ch = 0; ch < c; ++ch) {
    const auto one = conv_loop_nest(ih, iw, 1, kh, kw, sh, sw, ph, pw, 1);
    t.flops += one.flops;
    t.maccs += one.maccs;
  }
  return t;
}

// Dense: per output unit, n_in multiplies, n_in - 1 adds and one bias add.
inline Tally dense_loop_nest(std::int64_t n_in, std::int64_t n_out) {
  Tally t;
  for (std::int64_t o = 0; o < n_out; ++o) {
    for (std::int64_t i = 0; i < n_in; ++i) {
      ++t.flops;
      ++t.maccs;
      if (i > 0) ++t.flops;
    }
    ++t.flops;
    ++t.maccs;
  }
  return t;
}

// O(n^2) dominance filter, in input order.
inline std::vector<ParetoPoint> brute_front(std::span<const ParetoPoint> points) {
  std::vector<ParetoPoint> front;
  for (const auto& p : points) {
    bool dominated = false;
    for (const auto& q : points) {
      const bool no_worse = q.latency_ms <= p.latency_ms && q.energy_mj <= p.energy_mj;
      const bool better = q.latency_ms < p.latency_ms || q.energy_mj < p.energy_mj;
      if (no_worse && better) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(p);
  }
  return front;
}

}  // namespace costlab::oracle
