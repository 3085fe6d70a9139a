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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dynres {

enum class ErrorCode {
  kInvalidRange,
  kInvalidDimensions,
  kInvalidTarget,
  kDimensionMismatch,
  kNotDivisible,
  kIo,
  kParse,
  kEmptyBucket,
  kEmptyInput,
  kConfig,
  kTransport,
  kUsage,
};

const char* to_string(ErrorCode code);

// Base for every error the library raises. The CLI maps the code onto an
// exit status, so callers that need to branch should switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Malformed JSONL input. line is 1-based; byte_offset is the offset of the
// start of the offending line within the stream.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t byte_offset,
             const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t line_;
  std::size_t byte_offset_;
};

class TransportError : public Error {
 public:
  explicit TransportError(const std::string& message)
      : Error(ErrorCode::kTransport, message) {}
};

}  // namespace dynres
