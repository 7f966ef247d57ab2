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
#include <vector>

#include "eblc/frame.hpp"
#include "eblc/kernels.hpp"

namespace eblc::kernels::parallel {
namespace {

using Index = std::ptrdiff_t;

double sum_in_order(const std::vector<double>& partial) {
  double total = 0.0;
  for (const double v : partial) total += v;
  return total;
}

}  // namespace

std::uint64_t squared_error_sum(std::span<const std::uint8_t> a,
                                std::span<const std::uint8_t> b) {
  const Index n = static_cast<Index>(a.size());
  std::uint64_t sum = 0;
#pragma omp parallel for reduction(+ : sum) schedule(static)
  for (Index i = 0; i < n; ++i) {
    const int d = int{a[i]} - int{b[i]};
    sum += static_cast<std::uint64_t>(d * d);
  }
  return sum;
}

void luma_plane(std::span<const std::uint8_t> rgb, std::span<double> out) {
  const Index n = static_cast<Index>(out.size());
#pragma omp parallel for schedule(static)
  for (Index p = 0; p < n; ++p) {
    out[p] = luma(rgb[3 * p], rgb[3 * p + 1], rgb[3 * p + 2]);
  }
}

double ssim_mean(std::span<const double> a, std::span<const double> b,
                 int width, int height) {
  constexpr double c1 = (0.01 * 255) * (0.01 * 255);
  constexpr double c2 = (0.03 * 255) * (0.03 * 255);
  const auto g = ssim_window();
  const int ow = width - 10;
  const int oh = height - 10;
  const std::size_t hsz = static_cast<std::size_t>(height) * ow;
  std::vector<double> ha(hsz), hb(hsz), haa(hsz), hbb(hsz), hab(hsz);

#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const std::size_t in_row = static_cast<std::size_t>(y) * width;
    const std::size_t out_row = static_cast<std::size_t>(y) * ow;
    for (int x = 0; x < ow; ++x) {
      // Products are formed before weighting so that swapping a and b, or
      // passing a twice, gives bit-identical sums.
      double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
      for (int i = 0; i < 11; ++i) {
        const double va = a[in_row + x + i];
        const double vb = b[in_row + x + i];
        sa += g[i] * va;
        sb += g[i] * vb;
        saa += g[i] * (va * va);
        sbb += g[i] * (vb * vb);
        sab += g[i] * (va * vb);
      }
      ha[out_row + x] = sa;
      hb[out_row + x] = sb;
      haa[out_row + x] = saa;
      hbb[out_row + x] = sbb;
      hab[out_row + x] = sab;
    }
  }

  std::vector<double> row_sum(static_cast<std::size_t>(oh), 0.0);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < oh; ++y) {
    double acc = 0.0;
    for (int x = 0; x < ow; ++x) {
      double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
      for (int j = 0; j < 11; ++j) {
        const std::size_t k = static_cast<std::size_t>(y + j) * ow + x;
        ma += g[j] * ha[k];
        mb += g[j] * hb[k];
        saa += g[j] * haa[k];
        sbb += g[j] * hbb[k];
        sab += g[j] * hab[k];
      }
      const double va = saa - ma * ma;
      const double vb = sbb - mb * mb;
      const double cov = sab - ma * mb;
      acc += ((2 * ma * mb + c1) * (2 * cov + c2)) /
             ((ma * ma + mb * mb + c1) * (va + vb + c2));
    }
    row_sum[y] = acc;
  }
  return sum_in_order(row_sum) / (static_cast<double>(ow) * oh);
}

void quantize(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
              int step) {
  const Index n = static_cast<Index>(in.size());
  const int two_q = 2 * step;
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    // round half up, identical to lround for non-negative values
    out[i] = static_cast<std::uint8_t>((2 * int{in[i]} + step) / two_q);
  }
}

void dequantize(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
                int step) {
  const Index n = static_cast<Index>(in.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    out[i] = static_cast<std::uint8_t>(std::min(255, int{in[i]} * step));
  }
}

void scale_lightness(std::span<const std::uint8_t> rgb,
                     std::span<std::uint8_t> out, double factor) {
  const Index n = static_cast<Index>(rgb.size() / 3);
#pragma omp parallel for schedule(static)
  for (Index p = 0; p < n; ++p) {
    const Index i = 3 * p;
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
  const std::size_t row_len = static_cast<std::size_t>(width) * 3;
  std::vector<std::uint32_t> horiz(static_cast<std::size_t>(height) * row_len);

  // Horizontal running sums with edge replication.
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* src = rgb.data() + y * row_len;
    std::uint32_t* dst = horiz.data() + y * row_len;
    for (int c = 0; c < 3; ++c) {
      auto sample = [&](int x) {
        return std::uint32_t{src[std::clamp(x, 0, width - 1) * 3 + c]};
      };
      std::uint32_t sum = 0;
      for (int dx = -radius; dx <= radius; ++dx) sum += sample(dx);
      for (int x = 0; x < width; ++x) {
        dst[x * 3 + c] = sum;
        sum += sample(x + radius + 1);
        sum -= sample(x - radius);
      }
    }
  }

  const std::uint32_t area = static_cast<std::uint32_t>((2 * radius + 1) * (2 * radius + 1));
  const Index cols = static_cast<Index>(row_len);
#pragma omp parallel for schedule(static)
  for (Index col = 0; col < cols; ++col) {
    auto sample = [&](int y) {
      return horiz[static_cast<std::size_t>(std::clamp(y, 0, height - 1)) * row_len + col];
    };
    std::uint32_t sum = 0;
    for (int dy = -radius; dy <= radius; ++dy) sum += sample(dy);
    for (int y = 0; y < height; ++y) {
      out[static_cast<std::size_t>(y) * row_len + col] =
          static_cast<std::uint8_t>((sum + area / 2) / area);
      sum += sample(y + radius + 1);
      sum -= sample(y - radius);
    }
  }
}

void box_mean(std::span<const double> plane, std::span<double> out, int width,
              int height, int radius) {
  // Summed-area table with a zero border row and column.
  const std::size_t sw = static_cast<std::size_t>(width) + 1;
  std::vector<double> sat(sw * (static_cast<std::size_t>(height) + 1), 0.0);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    double run = 0.0;
    double* row = sat.data() + (y + 1) * sw;
    for (int x = 0; x < width; ++x) {
      run += plane[static_cast<std::size_t>(y) * width + x];
      row[x + 1] = run;
    }
  }
#pragma omp parallel for schedule(static)
  for (int x = 1; x <= width; ++x) {
    for (int y = 1; y <= height; ++y) sat[y * sw + x] += sat[(y - 1) * sw + x];
  }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const int y0 = std::max(0, y - radius), y1 = std::min(height - 1, y + radius);
    for (int x = 0; x < width; ++x) {
      const int x0 = std::max(0, x - radius), x1 = std::min(width - 1, x + radius);
      const double sum = sat[(y1 + 1) * sw + x1 + 1] - sat[y0 * sw + x1 + 1] -
                         sat[(y1 + 1) * sw + x0] + sat[y0 * sw + x0];
      out[static_cast<std::size_t>(y) * width + x] =
          sum / ((y1 - y0 + 1) * (x1 - x0 + 1));
    }
  }
}

Moments lightness_moments(std::span<const std::uint8_t> rgb) {
  const Index n = static_cast<Index>(rgb.size() / 3);
  constexpr Index kChunk = 4096;
  const Index chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> sums(chunks), squares(chunks);
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < chunks; ++c) {
    double s = 0.0, q = 0.0;
    for (Index i = c * kChunk; i < std::min(n, (c + 1) * kChunk); ++i) {
      const double l = rgb_to_hsl(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]).lightness;
      s += l;
      q += l * l;
    }
    sums[c] = s;
    squares[c] = q;
  }
  const double mean = sum_in_order(sums) / n;
  return {mean, std::max(0.0, sum_in_order(squares) / n - mean * mean)};
}

double ridge_energy(std::span<const double> luma, int width, int height,
                    int distance, double floor) {
  if (height < 3 || width <= 2 * distance) return 0.0;
  std::vector<double> rows(static_cast<std::size_t>(height), 0.0);
#pragma omp parallel for schedule(static)
  for (int y = 1; y < height - 1; ++y) {
    double acc = 0.0;
    const double* up = luma.data() + static_cast<std::size_t>(y - 1) * width;
    const double* mid = up + width;
    const double* down = mid + width;
    for (int x = distance; x + distance < width; ++x) {
      const double r =
          (std::min(up[x] - up[x - distance], up[x] - up[x + distance]) +
           std::min(mid[x] - mid[x - distance], mid[x] - mid[x + distance]) +
           std::min(down[x] - down[x - distance], down[x] - down[x + distance])) /
          3.0;
      if (r > floor) acc += r;
    }
    rows[y] = acc;
  }
  const double n = static_cast<double>(height - 2) * (width - 2 * distance);
  return sum_in_order(rows) / n;
}

Moments laplacian_moments(std::span<const double> luma, int width, int height) {
  if (width < 3 || height < 3) return {};
  std::vector<double> sums(static_cast<std::size_t>(height), 0.0);
  std::vector<double> squares(static_cast<std::size_t>(height), 0.0);
#pragma omp parallel for schedule(static)
  for (int y = 1; y < height - 1; ++y) {
    double s = 0.0, q = 0.0;
    for (int x = 1; x + 1 < width; ++x) {
      const std::size_t k = static_cast<std::size_t>(y) * width + x;
      const double lap = luma[k - 1] + luma[k + 1] + luma[k - width] +
                         luma[k + width] - 4.0 * luma[k];
      s += lap;
      q += lap * lap;
    }
    sums[y] = s;
    squares[y] = q;
  }
  const double n = static_cast<double>(width - 2) * (height - 2);
  const double mean = sum_in_order(sums) / n;
  return {mean, std::max(0.0, sum_in_order(squares) / n - mean * mean)};
}

}  // namespace eblc::kernels::parallel
