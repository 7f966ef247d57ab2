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
#include <cstdint>
#include <span>
#include <vector>

#include "eblc/condition.hpp"
#include "eblc/frame.hpp"

namespace eblc {

/// Parameters that turn a clear-weather frame into one condition.
struct Severity {
  EnvCondition condition = EnvCondition::Normal;
  double darkness_factor = 1.0;  // lightness multiplier in (0,1]
  double streak_density = 0.0;   // streaks per megapixel
  double streak_length = 12.0;   // pixels
  int blur_radius = 0;           // box blur radius in pixels
  std::uint64_t seed = 0;

  /// Throws InvalidArgument if the parameters contradict the condition.
  void validate() const;
};

struct RainStyle {
  Rgb color{200, 200, 200};
  double min_angle_deg = 70.0;  // measured from the +x axis; 90 is vertical
  double max_angle_deg = 110.0;
};

/// Per-condition defaults; every value may be overridden from configuration.
class SeverityTable {
 public:
  SeverityTable();

  Severity get(EnvCondition c, std::uint64_t seed) const;
  Severity& at(EnvCondition c) { return entries_[index_of(c)]; }
  const Severity& at(EnvCondition c) const { return entries_[index_of(c)]; }

 private:
  std::array<Severity, kConditionCount> entries_;
};

/// Scales HSL lightness of every pixel. factor must be in (0,1] (InvalidFactor).
Frame darken(const Frame& frame, double factor);

/// Draws round(density * w * h / 1e6) anti-aliased streaks, then applies a
/// normalized box blur. Streak centres are uniform over the frame, angles
/// uniform in the style's range; all draws come from Rng(seed) in the order
/// centre x, centre y, angle.
Frame add_rain(const Frame& frame, double density, double length, int blur_radius,
               std::uint64_t seed, const RainStyle& style = {});

/// darken followed by add_rain, skipping either at identity parameters.
Frame synthesize(const Frame& frame, const Severity& severity,
                 const RainStyle& style = {});

/// Applies `severity` to every frame, re-seeding frame i with
/// mix_seed(severity.seed, i).
std::vector<Frame> synthesize_sequence(std::span<const Frame> frames,
                                       const Severity& severity,
                                       const RainStyle& style = {});

}  // namespace eblc
