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

#include "eblc/augment.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "eblc/error.hpp"
#include "eblc/kernels.hpp"
#include "eblc/rng.hpp"

namespace eblc {
namespace {

class StreakCanvas {
 public:
  StreakCanvas(Frame& frame, Rgb color) : frame_(frame), color_(color) {}

  void blend(int x, int y, double alpha) {
    if (x < 0 || y < 0 || x >= frame_.width() || y >= frame_.height()) return;
    if (alpha <= 0.0) return;
    alpha = std::min(alpha, 1.0);
    std::uint8_t* p = frame_.at(x, y);
    const std::uint8_t target[3] = {color_.r, color_.g, color_.b};
    for (int c = 0; c < 3; ++c) {
      p[c] = static_cast<std::uint8_t>(std::lround(p[c] + (target[c] - p[c]) * alpha));
    }
  }

  // Xiaolin Wu's anti-aliased line.
  void line(double x0, double y0, double x1, double y1) {
    const bool steep = std::abs(y1 - y0) > std::abs(x1 - x0);
    if (steep) {
      std::swap(x0, y0);
      std::swap(x1, y1);
    }
    if (x0 > x1) {
      std::swap(x0, x1);
      std::swap(y0, y1);
    }
    const double dx = x1 - x0;
    const double gradient = dx == 0.0 ? 1.0 : (y1 - y0) / dx;

    auto plot = [&](int major, int minor, double a) {
      if (steep) {
        blend(minor, major, a);
      } else {
        blend(major, minor, a);
      }
    };
    auto fpart = [](double v) { return v - std::floor(v); };

    double xend = std::round(x0);
    double yend = y0 + gradient * (xend - x0);
    double xgap = 1.0 - fpart(x0 + 0.5);
    const int xpx1 = static_cast<int>(xend);
    const int ypx1 = static_cast<int>(std::floor(yend));
    plot(xpx1, ypx1, (1.0 - fpart(yend)) * xgap);
    plot(xpx1, ypx1 + 1, fpart(yend) * xgap);
    double intery = yend + gradient;

    xend = std::round(x1);
    yend = y1 + gradient * (xend - x1);
    xgap = fpart(x1 + 0.5);
    const int xpx2 = static_cast<int>(xend);
    const int ypx2 = static_cast<int>(std::floor(yend));
    plot(xpx2, ypx2, (1.0 - fpart(yend)) * xgap);
    plot(xpx2, ypx2 + 1, fpart(yend) * xgap);

    for (int x = xpx1 + 1; x < xpx2; ++x) {
      const int y = static_cast<int>(std::floor(intery));
      plot(x, y, 1.0 - fpart(intery));
      plot(x, y + 1, fpart(intery));
      intery += gradient;
    }
  }

 private:
  Frame& frame_;
  Rgb color_;
};

}  // namespace

void Severity::validate() const {
  auto fail = [&](const char* why) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(to_string(condition)) + " severity: " + why);
  };
  if (!(darkness_factor > 0.0 && darkness_factor <= 1.0)) fail("darkness_factor outside (0,1]");
  if (streak_density < 0.0) fail("negative streak_density");
  if (streak_length <= 0.0) fail("streak_length must be positive");
  if (blur_radius < 0) fail("negative blur_radius");
  if (condition == EnvCondition::Normal &&
      (darkness_factor != 1.0 || streak_density != 0.0 || blur_radius != 0)) {
    fail("normal must be the identity");
  }
  if (is_dark(condition) && streak_density != 0.0) fail("darkness severities draw no streaks");
  if (is_rain(condition) && darkness_factor != 1.0) fail("rain severities keep lightness");
}

SeverityTable::SeverityTable() {
  auto set = [&](EnvCondition c, double factor, double density, int blur) {
    Severity& s = entries_[index_of(c)];
    s.condition = c;
    s.darkness_factor = factor;
    s.streak_density = density;
    s.streak_length = 12.0;
    s.blur_radius = blur;
  };
  set(EnvCondition::Normal, 1.0, 0.0, 0);
  set(EnvCondition::LightDark, 0.7, 0.0, 0);
  set(EnvCondition::MediumDark, 0.5, 0.0, 0);
  set(EnvCondition::HighDark, 0.3, 0.0, 0);
  set(EnvCondition::LightRain, 1.0, 50.0, 1);
  // Blur grows with severity so that neighbouring rain classes differ in more
  // than streak count.
  set(EnvCondition::ModerateRain, 1.0, 150.0, 2);
  set(EnvCondition::HeavyRain, 1.0, 300.0, 3);
}

Severity SeverityTable::get(EnvCondition c, std::uint64_t seed) const {
  Severity s = entries_[index_of(c)];
  s.seed = seed;
  return s;
}

Frame darken(const Frame& frame, double factor) {
  if (!(factor > 0.0 && factor <= 1.0)) {
    throw Error(ErrorCode::InvalidFactor,
                "darkness factor " + std::to_string(factor) + " outside (0,1]");
  }
  Frame out(frame.width(), frame.height());
  kernels::parallel::scale_lightness(frame.samples(), out.samples(), factor);
  return out;
}

Frame add_rain(const Frame& frame, double density, double length, int blur_radius,
               std::uint64_t seed, const RainStyle& style) {
  if (density < 0.0 || blur_radius < 0) {
    throw Error(ErrorCode::InvalidArgument, "rain density and blur radius must be >= 0");
  }
  Frame canvas = frame;
  const auto count = std::llround(density * static_cast<double>(frame.pixel_count()) / 1e6);
  if (count > 0) {
    Rng rng(seed);
    StreakCanvas painter(canvas, style.color);
    const double half = length / 2.0;
    for (long long i = 0; i < count; ++i) {
      const double cx = uniform(rng, 0.0, frame.width());
      const double cy = uniform(rng, 0.0, frame.height());
      const double angle =
          uniform(rng, style.min_angle_deg, style.max_angle_deg) * std::numbers::pi / 180.0;
      const double dx = std::cos(angle) * half;
      const double dy = std::sin(angle) * half;
      painter.line(cx - dx, cy - dy, cx + dx, cy + dy);
    }
  }
  if (blur_radius == 0) return canvas;
  Frame blurred(frame.width(), frame.height());
  kernels::parallel::box_blur(canvas.samples(), blurred.samples(), frame.width(),
                              frame.height(), blur_radius);
  return blurred;
}

Frame synthesize(const Frame& frame, const Severity& s, const RainStyle& style) {
  s.validate();
  Frame out = s.darkness_factor != 1.0 ? darken(frame, s.darkness_factor) : frame;
  if (s.streak_density > 0.0 || s.blur_radius > 0) {
    out = add_rain(out, s.streak_density, s.streak_length, s.blur_radius, s.seed, style);
  }
  return out;
}

std::vector<Frame> synthesize_sequence(std::span<const Frame> frames, const Severity& s,
                                       const RainStyle& style) {
  std::vector<Frame> out;
  out.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    Severity per_frame = s;
    per_frame.seed = mix_seed(s.seed, i);
    out.push_back(synthesize(frames[i], per_frame, style));
  }
  return out;
}

}  // namespace eblc
