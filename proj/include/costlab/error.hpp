// Copyright 2026 The costlab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace costlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document. `position()` is a byte offset into the text
/// (or a 1-based line number for line-oriented formats, see `line()`).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position, std::size_t line = 0)
      : Error(what), position_(position), line_(line) {}

  std::size_t position() const noexcept { return position_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t position_;
  std::size_t line_;
};

/// A model or profile violates one of its invariants.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::optional<std::size_t> layer_index,
                  std::string rule)
      : Error(what), layer_index_(layer_index), rule_(std::move(rule)) {}

  std::optional<std::size_t> layer_index() const noexcept { return layer_index_; }
  const std::string& rule() const noexcept { return rule_; }

 private:
  std::optional<std::size_t> layer_index_;
  std::string rule_;
};

/// An operation count left the 64-bit unsigned range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Estimation could not proceed (missing profile data, zero denominators).
class EstimateError : public Error {
 public:
  using Error::Error;
};

/// Statistical fit is undefined for the given data.
class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

/// Calibration data does not cover any fittable cell.
class CoverageError : public Error {
 public:
  CoverageError(const std::string& what, std::vector<std::string> missing)
      : Error(what), missing_(std::move(missing)) {}

  const std::vector<std::string>& missing_cells() const noexcept { return missing_; }

 private:
  std::vector<std::string> missing_;
};

}  // namespace costlab
