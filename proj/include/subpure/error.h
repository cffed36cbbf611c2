// Copyright 2026 The subpure Authors
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

#ifndef SUBPURE_ERROR_H_
#define SUBPURE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace subpure {

enum class ErrorCode {
  kIndex,
  kInvalidGate,
  kDimension,
  kImpossibleOutcome,
  kValidity,
  kConfiguration,
  kEncoding,
  kSampling,
  kParameter,
  kNumeric,
  kTrainingDivergence,
  kNotProduct,
  kOrthogonalSupports,
  kCorruptCompactState,
  kDegenerateBranch,
  kParse,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code), message_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// what() without the code-name prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace subpure

#endif  // SUBPURE_ERROR_H_
