// Copyright 2026 The photomesh Authors
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

#include <stdexcept>
#include <string>

namespace photomesh {

enum class ErrorCode {
  InvalidDimension,
  InvalidArgument,
  OutOfRange,
  NotUnitary,
  DimensionMismatch,
  LayoutMismatch,
  Infeasible,
  Io,
  Parse,
};

/// Exception thrown by every fallible operation in the library. The code
/// lets the C API translate failures into stable status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a matrix fails a unitarity check; carries the measured
/// max-entry deviation of U^dagger U from the identity.
class NotUnitaryError : public Error {
 public:
  NotUnitaryError(double deviation, const std::string &what)
      : Error(ErrorCode::NotUnitary, what), deviation_(deviation) {}

  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

}  // namespace photomesh
