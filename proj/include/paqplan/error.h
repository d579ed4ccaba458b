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

#ifndef PAQPLAN_ERROR_H_
#define PAQPLAN_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace paq {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidSpace,
  kInfeasibleGrid,
  kUnsupportedStrategy,
  kInvalidState,
  kParse,
  kSyntax,
  kSemantic,
  kBinding,
  kTooSmall,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// All library failures surface as paq::Error. `position` carries a line number
// for file parsers and a character offset for the clause parser; zero when
// not applicable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t position = 0)
      : std::runtime_error(message), code_(code), position_(position) {}

  ErrorCode code() const { return code_; }
  std::size_t position() const { return position_; }

 private:
  ErrorCode code_;
  std::size_t position_;
};

}  // namespace paq

#endif  // PAQPLAN_ERROR_H_
