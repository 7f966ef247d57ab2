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
#include <string>

#include "eblc/detect.hpp"
#include "eblc/error.hpp"
#include "eblc/rng.hpp"

namespace eblc {
namespace {

struct Rect {
  int x0, y0, x1, y1;  // half-open
};

bool overlaps(const Rect& a, const Rect& b, int margin) {
  return a.x0 < b.x1 + margin && b.x0 < a.x1 + margin && a.y0 < b.y1 + margin &&
         b.y0 < a.y1 + margin;
}

// Bilinear value noise with a smoothstep fade, one value per grid corner.
std::vector<double> value_noise(Rng& rng, int width, int height, const SceneStyle& style) {
  const double mean =
      style.background_mean + uniform_int(rng, -style.background_jitter, style.background_jitter);
  const int cell = std::max(style.blob_cell, 1);
  const int gw = width / cell + 2;
  const int gh = height / cell + 2;
  std::vector<double> grid(static_cast<std::size_t>(gw) * gh);
  for (double& g : grid) {
    g = mean + uniform(rng, -style.blob_amplitude, style.blob_amplitude);
  }
  auto fade = [](double t) { return t * t * (3.0 - 2.0 * t); };

  std::vector<double> out(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    const int gy = y / cell;
    const double ty = fade(static_cast<double>(y % cell) / cell);
    for (int x = 0; x < width; ++x) {
      const int gx = x / cell;
      const double tx = fade(static_cast<double>(x % cell) / cell);
      const double* row0 = &grid[static_cast<std::size_t>(gy) * gw + gx];
      const double* row1 = row0 + gw;
      const double top = row0[0] + (row0[1] - row0[0]) * tx;
      const double bottom = row1[0] + (row1[1] - row1[0]) * tx;
      out[static_cast<std::size_t>(y) * width + x] = top + (bottom - top) * ty;
    }
  }
  return out;
}

}  // namespace

Scene synthesize_scene(std::uint64_t seed, int n_targets, int width, int height,
                       const SceneStyle& style, std::string_view frame_id) {
  if (n_targets < 0) throw Error(ErrorCode::InvalidArgument, "n_targets must be >= 0");
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::InvalidArgument, "scene dimensions must be positive");
  }
  const int max_w = style.max_target_width;
  const int max_h = style.max_target_height;
  const bool fits = width - 2 * style.margin >= max_w && height - 2 * style.margin >= max_h;
  if (n_targets > 0 && !fits) {
    throw Error(ErrorCode::TooManyTargets, "targets do not fit in a " + std::to_string(width) +
                                               "x" + std::to_string(height) + " frame");
  }

  Rng rng(seed);
  std::vector<Rect> placed;
  constexpr int kAttemptsPerTarget = 2000;
  for (int t = 0; t < n_targets; ++t) {
    bool ok = false;
    for (int attempt = 0; attempt < kAttemptsPerTarget && !ok; ++attempt) {
      const int w = uniform_int(rng, style.min_target_width, max_w);
      const int h = uniform_int(rng, style.min_target_height, max_h);
      const int x = uniform_int(rng, style.margin, width - style.margin - w);
      const int y = uniform_int(rng, style.margin, height - style.margin - h);
      const Rect r{x, y, x + w, y + h};
      ok = std::none_of(placed.begin(), placed.end(),
                        [&](const Rect& p) { return overlaps(p, r, style.margin); });
      if (ok) placed.push_back(r);
    }
    if (!ok) {
      throw Error(ErrorCode::TooManyTargets, "could not place target " + std::to_string(t + 1) +
                                                 " of " + std::to_string(n_targets));
    }
  }

  const std::vector<double> base = value_noise(rng, width, height, style);
  Frame frame(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      std::uint8_t* p = frame.at(x, y);
      const double b = base[static_cast<std::size_t>(y) * width + x];
      for (int c = 0; c < Frame::kChannels; ++c) {
        const int noise = uniform_int(rng, -style.noise_amplitude, style.noise_amplitude);
        p[c] = static_cast<std::uint8_t>(std::clamp<long>(std::lround(b) + noise, 0, 255));
      }
    }
  }

  Scene scene;
  for (const Rect& r : placed) {
    for (int y = r.y0; y < r.y1; ++y) {
      for (int x = r.x0; x < r.x1; ++x) {
        std::uint8_t* p = frame.at(x, y);
        for (int c = 0; c < Frame::kChannels; ++c) {
          p[c] = static_cast<std::uint8_t>(std::max(p[c] - style.contrast, 0));
        }
      }
    }
    Annotation a;
    a.box = {static_cast<double>(r.x0), static_cast<double>(r.y0), static_cast<double>(r.x1),
             static_cast<double>(r.y1)};
    a.frame_id = std::string(frame_id);
    scene.annotations.push_back(std::move(a));
  }
  scene.frame = std::move(frame);
  return scene;
}

}  // namespace eblc
