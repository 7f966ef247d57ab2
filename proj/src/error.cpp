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

#include "eblc/error.hpp"

namespace eblc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::UnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::TruncatedData: return "TruncatedData";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FrameTooSmall: return "FrameTooSmall";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::MixedDimensions: return "MixedDimensions";
    case ErrorCode::CorruptPayload: return "CorruptPayload";
    case ErrorCode::ExternalEncoderFailure: return "ExternalEncoderFailure";
    case ErrorCode::InvalidFactor: return "InvalidFactor";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::TooManyTargets: return "TooManyTargets";
    case ErrorCode::NoGroundTruth: return "NoGroundTruth";
    case ErrorCode::UncalibratedThresholds: return "UncalibratedThresholds";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::IncompleteTable: return "IncompleteTable";
    case ErrorCode::MissingModel: return "MissingModel";
    case ErrorCode::ZeroCompressedSize: return "ZeroCompressedSize";
    case ErrorCode::MalformedReport: return "MalformedReport";
  }
  return "Unknown";
}

}  // namespace eblc
