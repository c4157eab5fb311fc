// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace costlab::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Exit codes: 0 success, 1 usage/IO/parse error, 2 lint warnings present.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitWarnings = 2;

/// Runs the `costlab` command line. `args[0]` is the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace costlab::cli
