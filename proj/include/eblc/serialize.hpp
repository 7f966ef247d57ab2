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

// JSON forms of the persisted types. Objects are written with sorted keys so
// identical values always serialize to identical bytes. Infinite PSNR is the
// string "inf"; unbounded band edges are null.

#include <string>
#include <string_view>

#include "json.hpp"

#include "eblc/augment.hpp"
#include "eblc/calibrate.hpp"
#include "eblc/classify.hpp"
#include "eblc/codec.hpp"
#include "eblc/controller.hpp"
#include "eblc/detect.hpp"
#include "eblc/error.hpp"

namespace eblc {

using Json = nlohmann::json;

/// Parses `text`, reporting failures as `code` with `what` in the message.
Json parse_json(std::string_view text, std::string_view what,
                ErrorCode code = ErrorCode::InvalidArgument);

Json decibels_to_json(double db);
double decibels_from_json(const Json& j);

void to_json(Json& j, EnvCondition c);
void from_json(const Json& j, EnvCondition& c);

void to_json(Json& j, const DetectorConfig& c);
void from_json(const Json& j, DetectorConfig& c);
void to_json(Json& j, const SceneStyle& s);
void from_json(const Json& j, SceneStyle& s);
void to_json(Json& j, const Severity& s);
void from_json(const Json& j, Severity& s);
void to_json(Json& j, const CalibrationConfig& c);
void from_json(const Json& j, CalibrationConfig& c);
void to_json(Json& j, const ControllerConfig& c);
void from_json(const Json& j, ControllerConfig& c);
void to_json(Json& j, const ExternalCodecConfig& c);
void from_json(const Json& j, ExternalCodecConfig& c);
void to_json(Json& j, const FeatureParams& p);
void from_json(const Json& j, FeatureParams& p);
void to_json(Json& j, const FeatureVector& v);
void to_json(Json& j, const ClassifierConfig& c);
void from_json(const Json& j, ClassifierConfig& c);
void to_json(Json& j, const Detection& d);

std::string reference_table_to_json(const ReferenceTable& table);
/// Throws MalformedReport on missing or mistyped fields.
ReferenceTable reference_table_from_json(std::string_view text);

std::string classifier_config_to_json(const ClassifierConfig& config);
ClassifierConfig classifier_config_from_json(std::string_view text);

/// One JSON object on one line, no trailing newline.
std::string step_report_to_json(const StepReport& r);
/// Throws MalformedReport.
StepReport step_report_from_json(std::string_view line);

}  // namespace eblc
