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

#include "eblc/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "eblc/error.hpp"
#include "eblc/kernels.hpp"

namespace eblc {
namespace {

// Weber contrast of every detector pixel against its local background.
struct ContrastMap {
  int size = 0;
  int src_width = 0;
  int src_height = 0;
  std::vector<double> contrast;
};

ContrastMap contrast_map(const Frame& frame, const DetectorConfig& cfg) {
  const int s = cfg.input_size;
  ContrastMap map;
  map.size = s;
  map.src_width = frame.width();
  map.src_height = frame.height();

  std::vector<int> src_x(s);
  for (int x = 0; x < s; ++x) {
    src_x[x] = static_cast<int>((2LL * x + 1) * frame.width() / (2LL * s));
  }
  std::vector<double> plane(static_cast<std::size_t>(s) * s);
  for (int y = 0; y < s; ++y) {
    const int sy = static_cast<int>((2LL * y + 1) * frame.height() / (2LL * s));
    for (int x = 0; x < s; ++x) {
      const std::uint8_t* p = frame.at(src_x[x], sy);
      plane[static_cast<std::size_t>(y) * s + x] = luma(p[0], p[1], p[2]);
    }
  }

  if (cfg.smoothing_radius > 0) {
    std::vector<double> smoothed(plane.size());
    kernels::parallel::box_mean(plane, smoothed, s, s, cfg.smoothing_radius);
    plane.swap(smoothed);
  }

  std::vector<double> background(plane.size());
  kernels::parallel::box_mean(plane, background, s, s, cfg.background_radius);

  map.contrast.resize(plane.size());
  for (std::size_t i = 0; i < plane.size(); ++i) {
    map.contrast[i] =
        (background[i] - plane[i]) / std::max(background[i], cfg.contrast_floor);
  }
  return map;
}

std::vector<Detection> components(const ContrastMap& map, const DetectorConfig& cfg,
                                  double threshold) {
  const int s = map.size;
  const double sx = static_cast<double>(map.src_width) / s;
  const double sy = static_cast<double>(map.src_height) / s;

  std::vector<std::uint8_t> seen(map.contrast.size(), 0);
  std::vector<int> stack;
  std::vector<Detection> found;

  for (int start = 0; start < s * s; ++start) {
    if (seen[start] || map.contrast[start] < threshold) continue;
    seen[start] = 1;
    stack.assign(1, start);
    int min_x = s, min_y = s, max_x = -1, max_y = -1;
    int area = 0;
    double sum = 0.0;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      const int x = i % s;
      const int y = i / s;
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
      ++area;
      sum += map.contrast[i];
      auto visit = [&](int j) {
        if (!seen[j] && map.contrast[j] >= threshold) {
          seen[j] = 1;
          stack.push_back(j);
        }
      };
      if (x > 0) visit(i - 1);
      if (x + 1 < s) visit(i + 1);
      if (y > 0) visit(i - s);
      if (y + 1 < s) visit(i + s);
    }
    if (area < cfg.min_area) continue;

    Detection d;
    d.box = {min_x * sx, min_y * sy, (max_x + 1) * sx, (max_y + 1) * sy};
    d.score = std::clamp(sum / area, 0.0, 1.0);
    if (d.score < cfg.score_threshold) continue;
    found.push_back(std::move(d));
  }
  return nms(found, cfg.nms_iou_threshold);
}

}  // namespace

void DetectorConfig::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (input_size <= 0) {
    throw Error(ErrorCode::InvalidArgument, "input_size must be positive");
  }
  if (!unit(nms_iou_threshold) || !unit(score_threshold)) {
    throw Error(ErrorCode::InvalidArgument, "detector thresholds must lie in [0,1]");
  }
  if (background_radius < 1 || min_area < 1 || contrast_floor <= 0.0 || smoothing_radius < 0) {
    throw Error(ErrorCode::InvalidArgument,
                "background_radius, min_area and contrast_floor must be positive");
  }
}

double iou(const BBox& a, const BBox& b) noexcept {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  const double inter = w * h;
  return inter / (a.area() + b.area() - inter);
}

std::vector<Detection> nms(std::span<const Detection> detections, double iou_threshold) {
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].score > detections[b].score;
  });

  std::vector<Detection> kept;
  for (const std::size_t i : order) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
      return iou(k.box, detections[i].box) >= iou_threshold;
    });
    if (!suppressed) kept.push_back(detections[i]);
  }
  return kept;
}

MatchResult match(std::span<const Detection> detections, std::span<const Annotation> truths,
                  double iou_min) {
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].score > detections[b].score;
  });

  std::vector<bool> taken(truths.size(), false);
  MatchResult r;
  for (const std::size_t i : order) {
    const Detection& d = detections[i];
    std::size_t best = truths.size();
    double best_iou = iou_min;
    for (std::size_t t = 0; t < truths.size(); ++t) {
      if (taken[t] || truths[t].class_label != d.class_label) continue;
      const double o = iou(d.box, truths[t].box);
      if (o >= best_iou && (best == truths.size() || o > best_iou)) {
        best = t;
        best_iou = o;
      }
    }
    if (best < truths.size()) {
      taken[best] = true;
      ++r.tp;
    } else {
      ++r.fp;
    }
  }
  r.fn = truths.size() - r.tp;
  return r;
}

double detection_accuracy(std::size_t tp, std::size_t /*fp*/, std::size_t fn) {
  if (tp + fn == 0) {
    throw Error(ErrorCode::NoGroundTruth, "accuracy needs at least one ground-truth box");
  }
  return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

AccuracyStats accuracy_stats(const MatchResult& m) {
  AccuracyStats s;
  s.recall = detection_accuracy(m.tp, m.fp, m.fn);
  s.precision = m.tp + m.fp == 0 ? 1.0 : static_cast<double>(m.tp) / (m.tp + m.fp);
  s.f1 = s.precision + s.recall == 0.0 ? 0.0
                                      : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

std::vector<Detection> contrast_detector(const Frame& frame, const DetectorConfig& cfg,
                                         double contrast_threshold) {
  cfg.validate();
  return components(contrast_map(frame, cfg), cfg, contrast_threshold);
}

std::vector<double> contrast_threshold_grid() {
  std::vector<double> grid;
  for (int i = 2; i <= 16; ++i) grid.push_back(i * 0.05);
  return grid;
}

double fit_contrast_threshold(std::span<const Frame> frames,
                              std::span<const std::vector<Annotation>> truths,
                              const DetectorConfig& cfg) {
  if (frames.size() != truths.size()) {
    throw Error(ErrorCode::InvalidArgument, "one annotation list per frame is required");
  }
  cfg.validate();
  std::vector<ContrastMap> maps(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) maps[i] = contrast_map(frames[i], cfg);

  const std::vector<double> grid = contrast_threshold_grid();
  std::vector<AccuracyStats> stats(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    MatchResult pooled;
    for (std::size_t i = 0; i < maps.size(); ++i) {
      pooled += match(components(maps[i], cfg, grid[g]), truths[i]);
    }
    stats[g] = accuracy_stats(pooled);
  }

  auto better = [](const AccuracyStats& a, const AccuracyStats& b) {
    return a.recall != b.recall ? a.recall > b.recall : a.f1 > b.f1;
  };
  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (better(stats[g], stats[best])) best = g;
  }
  // Centre of the run of equally good thresholds, for margin on both sides.
  std::size_t last = best;
  while (last + 1 < grid.size() && !better(stats[best], stats[last + 1]) &&
         !better(stats[last + 1], stats[best])) {
    ++last;
  }
  return grid[(best + last) / 2];
}

}  // namespace eblc
