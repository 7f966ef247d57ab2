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

#include "eblc/condition.hpp"

#include "eblc/error.hpp"

namespace eblc {
namespace {

struct Names {
  std::string_view kebab;
  std::string_view camel;
};

constexpr std::array<Names, kConditionCount> kNames = {{
    {"normal", "Normal"},
    {"light-dark", "LightDark"},
    {"medium-dark", "MediumDark"},
    {"high-dark", "HighDark"},
    {"light-rain", "LightRain"},
    {"moderate-rain", "ModerateRain"},
    {"heavy-rain", "HeavyRain"},
}};

}  // namespace

std::string_view to_string(EnvCondition c) noexcept { return kNames[index_of(c)].kebab; }

EnvCondition parse_condition(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (name == kNames[i].kebab || name == kNames[i].camel) {
      return static_cast<EnvCondition>(i);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown condition '" + std::string(name) + "'");
}

}  // namespace eblc
