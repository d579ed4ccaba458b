// Copyright 2026 The paqplan Authors.
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

#include "paqplan/error.h"

namespace paq {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidSpace: return "invalid-space";
    case ErrorCode::kInfeasibleGrid: return "infeasible-grid";
    case ErrorCode::kUnsupportedStrategy: return "unsupported-strategy";
    case ErrorCode::kInvalidState: return "invalid-state";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kSyntax: return "syntax";
    case ErrorCode::kSemantic: return "semantic";
    case ErrorCode::kBinding: return "binding";
    case ErrorCode::kTooSmall: return "too-small";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace paq
