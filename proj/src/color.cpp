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

#include <algorithm>
#include <cmath>

#include "eblc/frame.hpp"

namespace eblc {
namespace {

double hue_channel(double p, double q, double t) {
  if (t < 0.0) t += 1.0;
  if (t > 1.0) t -= 1.0;
  if (t < 1.0 / 6.0) return p + (q - p) * 6.0 * t;
  if (t < 0.5) return q;
  if (t < 2.0 / 3.0) return p + (q - p) * (2.0 / 3.0 - t) * 6.0;
  return p;
}

std::uint8_t to_sample(double unit) {
  const double v = std::round(unit * 255.0);
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

}  // namespace

HslPixel rgb_to_hsl(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  const int hi = std::max({r, g, b});
  const int lo = std::min({r, g, b});
  HslPixel p;
  p.lightness = (hi + lo) / 510.0;
  if (hi == lo) return p;

  const double d = (hi - lo) / 255.0;
  const double sum = (hi + lo) / 255.0;
  p.saturation = p.lightness > 0.5 ? d / (2.0 - sum) : d / sum;
  p.saturation = std::min(p.saturation, 1.0);

  const double rf = r / 255.0, gf = g / 255.0, bf = b / 255.0;
  double h;
  if (hi == r) {
    h = (gf - bf) / d + (g < b ? 6.0 : 0.0);
  } else if (hi == g) {
    h = (bf - rf) / d + 2.0;
  } else {
    h = (rf - gf) / d + 4.0;
  }
  p.hue = h * 60.0;
  if (p.hue >= 360.0) p.hue -= 360.0;
  return p;
}

Rgb hsl_to_rgb(const HslPixel& p) noexcept {
  const double l = p.lightness;
  const double s = p.saturation;
  if (s <= 0.0) {
    const auto v = to_sample(l);
    return {v, v, v};
  }
  const double q = l < 0.5 ? l * (1.0 + s) : l + s - l * s;
  const double pp = 2.0 * l - q;
  const double h = p.hue / 360.0;
  return {to_sample(hue_channel(pp, q, h + 1.0 / 3.0)),
          to_sample(hue_channel(pp, q, h)),
          to_sample(hue_channel(pp, q, h - 1.0 / 3.0))};
}

}  // namespace eblc
