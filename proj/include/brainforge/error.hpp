// Copyright 2026 The BrainForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace brainforge {

enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kConflict,
  kParse,
  kSchema,
  kRoundTrip,
  kCycle,
  kStaleReport,
  kArity,
  kIo,
};

const char* error_code_name(ErrorCode code);

// The single exception type thrown by the library. `detail` carries
// machine-oriented context (offending ids, line numbers) that callers may
// surface verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string detail = {})
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace brainforge
