/********************************************************************************
* Copyright 2026 The EBLC Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*    http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
********************************************************************************/

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eblc {

enum class ErrorCode {
  InvalidArgument,
  IoError,
  // raster
  MalformedHeader,
  UnsupportedMaxval,
  TruncatedData,
  // metrics
  DimensionMismatch,
  FrameTooSmall,
  EmptySequence,
  // codec
  MixedDimensions,
  CorruptPayload,
  ExternalEncoderFailure,
  // augment
  InvalidFactor,
  // detect
  MalformedXml,
  MissingField,
  TooManyTargets,
  NoGroundTruth,
  // classify
  UncalibratedThresholds,
  InsufficientSamples,
  // calibrate / controller / harness
  IncompleteTable,
  MissingModel,
  ZeroCompressedSize,
  MalformedReport,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every domain failure in the library is reported as an Error carrying a
/// machine-checkable code; the message names the failing input.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace eblc
