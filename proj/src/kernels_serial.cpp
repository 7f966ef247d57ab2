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

// Reference kernels: straightforward loops, no blocking, no threading.

#include <algorithm>
#include <array>
#include <cmath>

#include "eblc/frame.hpp"
#include "eblc/kernels.hpp"

namespace eblc::kernels {

std::span<const double> ssim_window() noexcept {
  static const auto window = [] {
    std::array<double, 11> w{};
    double sum = 0.0;
    for (int i = 0; i < 11; ++i) {
      const double d = i - 5;
      w[i] = std::exp(-(d * d) / (2.0 * 1.5 * 1.5));
      sum += w[i];
    }
    for (auto& v : w) v /= sum;
    return w;
  }();
  return window;
}

namespace serial {

std::uint64_t squared_error_sum(std::span<const std::uint8_t> a,
                                std::span<const std::uint8_t> b) {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int d = int{a[i]} - int{b[i]};
    sum += static_cast<std::uint64_t>(d * d);
  }
  return sum;
}

void luma_plane(std::span<const std::uint8_t> rgb, std::span<double> out) {
  for (std::size_t p = 0; p < out.size(); ++p) {
    out[p] = luma(rgb[3 * p], rgb[3 * p + 1], rgb[3 * p + 2]);
  }
}

double ssim_mean(std::span<const double> a, std::span<const double> b,
                 int width, int height) {
  constexpr double c1 = (0.01 * 255) * (0.01 * 255);
  constexpr double c2 = (0.03 * 255) * (0.03 * 255);
  const auto g = ssim_window();
  double total = 0.0;
  for (int y = 0; y + 11 <= height; ++y) {
    for (int x = 0; x + 11 <= width; ++x) {
      double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
      for (int j = 0; j < 11; ++j) {
        for (int i = 0; i < 11; ++i) {
          const double w = g[j] * g[i];
          const std::size_t k = static_cast<std::size_t>(y + j) * width + x + i;
          ma += w * a[k];
          mb += w * b[k];
          saa += w * (a[k] * a[k]);
          sbb += w * (b[k] * b[k]);
          sab += w * (a[k] * b[k]);
        }
      }
      const double va = saa - ma * ma;
      const double vb = sbb - mb * mb;
      const double cov = sab - ma * mb;
      total += ((2 * ma * mb + c1) * (2 * cov + c2)) /
               ((ma * ma + mb * mb + c1) * (va + vb + c2));
    }
  }
  return total / (static_cast<double>(width - 10) * (height - 10));
}

void quantize(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
              int step) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(std::lround(static_cast<double>(in[i]) / step));
  }
}

void dequantize(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
                int step) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(std::min(255, int{in[i]} * step));
  }
}

void scale_lightness(std::span<const std::uint8_t> rgb,
                     std::span<std::uint8_t> out, double factor) {
  for (std::size_t i = 0; i + 2 < rgb.size(); i += 3) {
    auto hsl = rgb_to_hsl(rgb[i], rgb[i + 1], rgb[i + 2]);
    hsl.lightness *= factor;
    const auto c = hsl_to_rgb(hsl);
    out[i] = c.r;
    out[i + 1] = c.g;
    out[i + 2] = c.b;
  }
}

void box_blur(std::span<const std::uint8_t> rgb, std::span<std::uint8_t> out,
              int width, int height, int radius) {
  const int k = 2 * radius + 1;
  const std::uint32_t area = static_cast<std::uint32_t>(k * k);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < 3; ++c) {
        std::uint32_t sum = 0;
        for (int dy = -radius; dy <= radius; ++dy) {
          const int yy = std::clamp(y + dy, 0, height - 1);
          for (int dx = -radius; dx <= radius; ++dx) {
            const int xx = std::clamp(x + dx, 0, width - 1);
            sum += rgb[(static_cast<std::size_t>(yy) * width + xx) * 3 + c];
          }
        }
        out[(static_cast<std::size_t>(y) * width + x) * 3 + c] =
            static_cast<std::uint8_t>((sum + area / 2) / area);
      }
    }
  }
}

void box_mean(std::span<const double> plane, std::span<double> out, int width,
              int height, int radius) {
  for (int y = 0; y < height; ++y) {
    const int y0 = std::max(0, y - radius), y1 = std::min(height - 1, y + radius);
    for (int x = 0; x < width; ++x) {
      const int x0 = std::max(0, x - radius), x1 = std::min(width - 1, x + radius);
      double sum = 0.0;
      for (int yy = y0; yy <= y1; ++yy) {
        for (int xx = x0; xx <= x1; ++xx) {
          sum += plane[static_cast<std::size_t>(yy) * width + xx];
        }
      }
      out[static_cast<std::size_t>(y) * width + x] =
          sum / ((y1 - y0 + 1) * (x1 - x0 + 1));
    }
  }
}

Moments lightness_moments(std::span<const std::uint8_t> rgb) {
  const std::size_t n = rgb.size() / 3;
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double l = rgb_to_hsl(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]).lightness;
    sum += l;
    sq += l * l;
  }
  const double mean = sum / n;
  return {mean, std::max(0.0, sq / n - mean * mean)};
}

double ridge_energy(std::span<const double> luma, int width, int height,
                    int distance, double floor) {
  double sum = 0.0;
  for (int y = 1; y + 1 < height; ++y) {
    for (int x = distance; x + distance < width; ++x) {
      double r = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        const std::size_t row = static_cast<std::size_t>(y + dy) * width;
        const double c = luma[row + x];
        r += std::min(c - luma[row + x - distance], c - luma[row + x + distance]);
      }
      r /= 3.0;
      if (r > floor) sum += r;
    }
  }
  const double n = static_cast<double>(height - 2) * (width - 2 * distance);
  return n > 0 ? sum / n : 0.0;
}

Moments laplacian_moments(std::span<const double> luma, int width, int height) {
  double sum = 0.0, sq = 0.0;
  for (int y = 1; y + 1 < height; ++y) {
    for (int x = 1; x + 1 < width; ++x) {
      const std::size_t k = static_cast<std::size_t>(y) * width + x;
      const double lap = luma[k - 1] + luma[k + 1] + luma[k - width] +
                         luma[k + width] - 4.0 * luma[k];
      sum += lap;
      sq += lap * lap;
    }
  }
  const double n = static_cast<double>(width - 2) * (height - 2);
  if (n <= 0) return {};
  const double mean = sum / n;
  return {mean, std::max(0.0, sq / n - mean * mean)};
}

}  // namespace serial
}  // namespace eblc::kernels
