// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bresse {

/// Failure classes raised by the library. The numeric value of each code is
/// the process exit status used by the command-line tool: 10-19 for
/// configuration problems, 20-29 for numerical failures, 30-39 for I/O.
enum class ErrorCode : int {
  ParseError = 10,
  SchemaError = 11,
  NonPositiveParameter = 12,
  BadInterval = 13,
  IncompatibleBoundary = 14,
  TooCoarse = 15,
  InvalidSimConfig = 16,
  UnknownCommand = 17,
  InvalidGrid = 18,
  UsageError = 19,

  EmptyGrid = 20,
  GridBeyondResolution = 21,
  SingularAtLambda = 22,
  NoConvergence = 23,
  ShiftSingular = 24,
  FactorizationFailed = 25,
  DimensionMismatch = 26,
  WindowTooSmall = 27,
  NonpositiveEnergy = 28,
  OutOfDomain = 29,

  FileRead = 30,
  FileWrite = 31,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  int exit_status() const noexcept { return static_cast<int>(code_); }

 private:
  ErrorCode code_;
};

}  // namespace bresse
