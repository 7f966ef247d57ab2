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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace eblc {

/// One decoded RGB image, row-major, 8 bits per channel, channels interleaved.
class Frame {
 public:
  static constexpr int kChannels = 3;

  Frame() = default;
  /// Zero-filled (black) frame. Throws InvalidArgument unless both sides > 0.
  Frame(int width, int height);
  /// Takes ownership of `data`; its length must be width * height * 3.
  Frame(int width, int height, std::vector<std::uint8_t> data);

  static Frame filled(int width, int height, std::uint8_t r, std::uint8_t g,
                      std::uint8_t b);
  static Frame filled(int width, int height, std::uint8_t v) {
    return filled(width, height, v, v, v);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  std::size_t sample_count() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const std::uint8_t> samples() const noexcept { return data_; }
  std::span<std::uint8_t> samples() noexcept { return data_; }

  const std::uint8_t* at(int x, int y) const noexcept {
    return data_.data() + (static_cast<std::size_t>(y) * width_ + x) * kChannels;
  }
  std::uint8_t* at(int x, int y) noexcept {
    return data_.data() + (static_cast<std::size_t>(y) * width_ + x) * kChannels;
  }

  bool same_shape(const Frame& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Hue in degrees [0,360), saturation and lightness in [0,1].
struct HslPixel {
  double hue = 0.0;
  double saturation = 0.0;
  double lightness = 0.0;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Standard RGB -> HSL. Achromatic pixels get hue 0.
HslPixel rgb_to_hsl(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;
/// Inverse of rgb_to_hsl, rounded to nearest and clamped to [0,255].
Rgb hsl_to_rgb(const HslPixel& p) noexcept;

/// BT.601 luma of an 8-bit RGB triple.
inline double luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

// Binary portable pixmap (P6, maxval 255).
Frame load_raster(const std::filesystem::path& path);
void save_raster(const Frame& frame, const std::filesystem::path& path);
Frame decode_raster(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_raster(const Frame& frame);

}  // namespace eblc
