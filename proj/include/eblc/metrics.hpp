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

#include <limits>
#include <span>

#include "eblc/frame.hpp"

namespace eblc {

/// PSNR of identical inputs.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

inline bool is_infinite_psnr(double db) noexcept { return db == kInfinitePsnr; }

struct QualityReport {
  double psnr = kInfinitePsnr;  // dB, or kInfinitePsnr
  double rmse = 0.0;
  double ssim = 1.0;
  std::size_t frame_count = 0;
};

// All three channels contribute to MSE, RMSE and PSNR. Each throws
// DimensionMismatch for frames of different shape.
double mse(const Frame& a, const Frame& b);
double rmse(const Frame& a, const Frame& b);
double psnr(const Frame& a, const Frame& b);
/// 10*log10(255^2 / mse), infinite at zero.
double psnr_from_mse(double mse) noexcept;

/// Mean SSIM over every 11x11 Gaussian window (sigma 1.5) of the luma plane,
/// K1 = 0.01, K2 = 0.03. Needs min(width, height) >= 11 (FrameTooSmall).
double ssim(const Frame& a, const Frame& b);

/// Per-frame metrics averaged in frame order. The PSNR mean skips identical
/// frames and is infinite only when every frame is identical.
QualityReport segment_quality(std::span<const Frame> original,
                              std::span<const Frame> degraded);
/// The PSNR field of segment_quality without the SSIM pass.
double segment_psnr(std::span<const Frame> original, std::span<const Frame> degraded);

}  // namespace eblc
