// Copyright 2026 The rdesign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rdesign {

enum class Errc {
  UnboundVariable,
  NegativeSqrtArgument,
  AlphaOutOfRange,
  MixedVariableLists,
  ParseError,
  InvalidSpec,
  UnknownTestCase,
  DimensionMismatch,
  DimensionUnsupported,
  IndexOverflow,
  BoundsMismatch,
  RankDeficient,
  InsufficientPoints,
  NonpositiveTemperature,
  IntegratorFailure,
  ToleranceNotMet,
  EmptyConstraintList,
  OutOfBox,
  DTooSmall,
  IoError,
};

inline std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::UnboundVariable: return "UnboundVariable";
    case Errc::NegativeSqrtArgument: return "NegativeSqrtArgument";
    case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
    case Errc::MixedVariableLists: return "MixedVariableLists";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::UnknownTestCase: return "UnknownTestCase";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DimensionUnsupported: return "DimensionUnsupported";
    case Errc::IndexOverflow: return "IndexOverflow";
    case Errc::BoundsMismatch: return "BoundsMismatch";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::InsufficientPoints: return "InsufficientPoints";
    case Errc::NonpositiveTemperature: return "NonpositiveTemperature";
    case Errc::IntegratorFailure: return "IntegratorFailure";
    case Errc::ToleranceNotMet: return "ToleranceNotMet";
    case Errc::EmptyConstraintList: return "EmptyConstraintList";
    case Errc::OutOfBox: return "OutOfBox";
    case Errc::DTooSmall: return "DTooSmall";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

/// Base exception for every failure raised by the library. The code is the
/// stable, machine-checkable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& reason)
      : Error(Errc::ParseError, "at " + std::to_string(position) + ": " + reason),
        position_(position),
        reason_(reason) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t position_;
  std::string reason_;
};

}  // namespace rdesign
