/* Copyright 2026 The dynres Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "dynres/errors.hpp"

namespace dynres {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidRange:
      return "invalid_range";
    case ErrorCode::kInvalidDimensions:
      return "invalid_dimensions";
    case ErrorCode::kInvalidTarget:
      return "invalid_target";
    case ErrorCode::kDimensionMismatch:
      return "dimension_mismatch";
    case ErrorCode::kNotDivisible:
      return "not_divisible";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kEmptyBucket:
      return "empty_bucket";
    case ErrorCode::kEmptyInput:
      return "empty_input";
    case ErrorCode::kConfig:
      return "config";
    case ErrorCode::kTransport:
      return "transport";
    case ErrorCode::kUsage:
      return "usage";
  }
  return "unknown";
}

ParseError::ParseError(std::size_t line, std::size_t byte_offset,
                       const std::string& message)
    : Error(ErrorCode::kParse, "line " + std::to_string(line) + " (byte " +
                                   std::to_string(byte_offset) +
                                   "): " + message),
      line_(line),
      byte_offset_(byte_offset) {}

}  // namespace dynres
