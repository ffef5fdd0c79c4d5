/*
 * Copyright 2026 The latkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LATKIT_ERROR_HPP_
#define LATKIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace latkit {

enum class ErrorCode {
  kSingularBasis = 1,
  kBudgetExceeded,
  kToleranceUnreachable,
  kDimensionTooLarge,
  kReductionUnstable,
  kInvalidArgument,
  kParseError,
  kIoError,
};

const char* error_code_name(ErrorCode code);

// All library failures are reported as Error; the C layer maps `code()` onto
// latkit_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace latkit

#endif  // LATKIT_ERROR_HPP_
