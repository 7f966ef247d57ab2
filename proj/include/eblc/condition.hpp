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

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace eblc {

/// The seven environmental conditions, in severity order.
enum class EnvCondition : int {
  Normal = 0,
  LightDark,
  MediumDark,
  HighDark,
  LightRain,
  ModerateRain,
  HeavyRain,
};

inline constexpr std::size_t kConditionCount = 7;

inline constexpr std::array<EnvCondition, kConditionCount> kAllConditions = {
    EnvCondition::Normal,    EnvCondition::LightDark,    EnvCondition::MediumDark,
    EnvCondition::HighDark,  EnvCondition::LightRain,    EnvCondition::ModerateRain,
    EnvCondition::HeavyRain,
};

constexpr std::size_t index_of(EnvCondition c) noexcept {
  return static_cast<std::size_t>(c);
}

constexpr bool is_dark(EnvCondition c) noexcept {
  return c == EnvCondition::LightDark || c == EnvCondition::MediumDark ||
         c == EnvCondition::HighDark;
}

constexpr bool is_rain(EnvCondition c) noexcept {
  return c == EnvCondition::LightRain || c == EnvCondition::ModerateRain ||
         c == EnvCondition::HeavyRain;
}

/// Kebab-case name, e.g. "medium-dark".
std::string_view to_string(EnvCondition c) noexcept;
/// Accepts kebab-case or CamelCase names; throws InvalidArgument otherwise.
EnvCondition parse_condition(std::string_view name);

}  // namespace eblc
