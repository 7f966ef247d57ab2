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

#include "eblc/metrics.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "eblc/error.hpp"
#include "eblc/kernels.hpp"

namespace eblc {
namespace {

void require_same_shape(const Frame& a, const Frame& b) {
  if (!a.same_shape(b) || a.empty()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                    " vs " + std::to_string(b.width()) + "x" +
                    std::to_string(b.height()));
  }
}

}  // namespace

double mse(const Frame& a, const Frame& b) {
  require_same_shape(a, b);
  const auto sum = kernels::parallel::squared_error_sum(a.samples(), b.samples());
  return static_cast<double>(sum) / static_cast<double>(a.sample_count());
}

double rmse(const Frame& a, const Frame& b) { return std::sqrt(mse(a, b)); }

double psnr_from_mse(double m) noexcept {
  if (m <= 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

double psnr(const Frame& a, const Frame& b) { return psnr_from_mse(mse(a, b)); }

double ssim(const Frame& a, const Frame& b) {
  require_same_shape(a, b);
  if (std::min(a.width(), a.height()) < 11) {
    throw Error(ErrorCode::FrameTooSmall,
                "ssim needs at least 11x11, got " + std::to_string(a.width()) +
                    "x" + std::to_string(a.height()));
  }
  std::vector<double> la(a.pixel_count()), lb(b.pixel_count());
  kernels::parallel::luma_plane(a.samples(), la);
  kernels::parallel::luma_plane(b.samples(), lb);
  return kernels::parallel::ssim_mean(la, lb, a.width(), a.height());
}

namespace {

void require_pairable(std::span<const Frame> original, std::span<const Frame> degraded) {
  if (original.empty()) {
    throw Error(ErrorCode::EmptySequence, "segment_quality on empty sequence");
  }
  if (original.size() != degraded.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "sequence lengths " + std::to_string(original.size()) + " vs " +
                    std::to_string(degraded.size()));
  }
}

}  // namespace

double segment_psnr(std::span<const Frame> original, std::span<const Frame> degraded) {
  require_pairable(original, degraded);
  double sum = 0.0;
  std::size_t finite = 0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    const double m = mse(original[i], degraded[i]);
    if (m > 0.0) {
      sum += psnr_from_mse(m);
      ++finite;
    }
  }
  return finite ? sum / static_cast<double>(finite) : kInfinitePsnr;
}

QualityReport segment_quality(std::span<const Frame> original,
                              std::span<const Frame> degraded) {
  require_pairable(original, degraded);
  QualityReport report;
  report.frame_count = original.size();
  double psnr_sum = 0.0, rmse_sum = 0.0, ssim_sum = 0.0;
  std::size_t finite = 0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    const double m = mse(original[i], degraded[i]);
    if (m > 0.0) {
      psnr_sum += psnr_from_mse(m);
      ++finite;
    }
    rmse_sum += std::sqrt(m);
    ssim_sum += m > 0.0 ? ssim(original[i], degraded[i]) : 1.0;
  }
  const double n = static_cast<double>(original.size());
  report.psnr = finite ? psnr_sum / static_cast<double>(finite) : kInfinitePsnr;
  report.rmse = rmse_sum / n;
  report.ssim = ssim_sum / n;
  return report;
}

}  // namespace eblc
