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

// Data-parallel pixel kernels. Every kernel exists twice with the same
// signature: `serial::` is a direct, unoptimized reference kept for tests and
// benchmarks; `parallel::` is the OpenMP implementation the library uses.
// Integer kernels agree bit-exactly; floating reductions agree to rounding.
// Parallel reductions accumulate per row and sum rows in index order, so their
// results do not depend on the thread count.

#include <cstdint>
#include <span>

namespace eblc::kernels {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

namespace serial {

std::uint64_t squared_error_sum(std::span<const std::uint8_t> a,
                                std::span<const std::uint8_t> b);
void luma_plane(std::span<const std::uint8_t> rgb, std::span<double> out);
double ssim_mean(std::span<const double> a, std::span<const double> b,
                 int width, int height);
void quantize(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
              int step);
void dequantize(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
                int step);
void scale_lightness(std::span<const std::uint8_t> rgb,
                     std::span<std::uint8_t> out, double factor);
void box_blur(std::span<const std::uint8_t> rgb, std::span<std::uint8_t> out,
              int width, int height, int radius);
void box_mean(std::span<const double> plane, std::span<double> out, int width,
              int height, int radius);
Moments lightness_moments(std::span<const std::uint8_t> rgb);
double ridge_energy(std::span<const double> luma, int width, int height,
                    int distance, double floor);
Moments laplacian_moments(std::span<const double> luma, int width, int height);

}  // namespace serial

namespace parallel {

std::uint64_t squared_error_sum(std::span<const std::uint8_t> a,
                                std::span<const std::uint8_t> b);
void luma_plane(std::span<const std::uint8_t> rgb, std::span<double> out);
double ssim_mean(std::span<const double> a, std::span<const double> b,
                 int width, int height);
void quantize(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
              int step);
void dequantize(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
                int step);
void scale_lightness(std::span<const std::uint8_t> rgb,
                     std::span<std::uint8_t> out, double factor);
void box_blur(std::span<const std::uint8_t> rgb, std::span<std::uint8_t> out,
              int width, int height, int radius);
void box_mean(std::span<const double> plane, std::span<double> out, int width,
              int height, int radius);
Moments lightness_moments(std::span<const std::uint8_t> rgb);
double ridge_energy(std::span<const double> luma, int width, int height,
                    int distance, double floor);
Moments laplacian_moments(std::span<const double> luma, int width, int height);

}  // namespace parallel

/// Normalized 11-tap Gaussian (sigma 1.5) used by both SSIM kernels.
std::span<const double> ssim_window() noexcept;

}  // namespace eblc::kernels
