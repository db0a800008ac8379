// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "bresse/error.hpp"

namespace bresse {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::BadInterval: return "BadInterval";
    case ErrorCode::IncompatibleBoundary: return "IncompatibleBoundary";
    case ErrorCode::TooCoarse: return "TooCoarse";
    case ErrorCode::InvalidSimConfig: return "InvalidSimConfig";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::GridBeyondResolution: return "GridBeyondResolution";
    case ErrorCode::SingularAtLambda: return "SingularAtLambda";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ShiftSingular: return "ShiftSingular";
    case ErrorCode::FactorizationFailed: return "FactorizationFailed";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::NonpositiveEnergy: return "NonpositiveEnergy";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::FileRead: return "FileRead";
    case ErrorCode::FileWrite: return "FileWrite";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace bresse
