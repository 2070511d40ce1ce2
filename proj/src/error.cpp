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

#include "brainforge/error.hpp"

namespace brainforge {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kSchema: return "schema_violation";
    case ErrorCode::kRoundTrip: return "round_trip_mismatch";
    case ErrorCode::kCycle: return "cycle";
    case ErrorCode::kStaleReport: return "stale_report";
    case ErrorCode::kArity: return "arity_mismatch";
    case ErrorCode::kIo: return "io_error";
  }
  return "unknown";
}

}  // namespace brainforge
