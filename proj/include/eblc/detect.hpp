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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eblc/frame.hpp"

namespace eblc {

inline constexpr std::string_view kPersonLabel = "person";

/// Axis-aligned box in frame pixel coordinates, half-open: a w x h block of
/// pixels starting at (x, y) is {x, y, x + w, y + h}.
struct BBox {
  double x_min = 0;
  double y_min = 0;
  double x_max = 0;
  double y_max = 0;

  double area() const noexcept { return (x_max - x_min) * (y_max - y_min); }
  bool valid() const noexcept { return x_min < x_max && y_min < y_max; }
  friend bool operator==(const BBox&, const BBox&) = default;
};

struct Detection {
  BBox box;
  double score = 0.0;  // [0,1]
  std::string class_label{kPersonLabel};
};

struct Annotation {
  BBox box;
  std::string class_label{kPersonLabel};
  std::string frame_id;
};

struct DetectorConfig {
  int input_size = 416;           // frames are resized to input_size^2
  double nms_iou_threshold = 0.5;
  double score_threshold = 0.0;
  int background_radius = 69;     // box-mean window radius, detector pixels
  int min_area = 30;              // smallest component kept, detector pixels
  double contrast_floor = 16.0;   // denominator floor of the Weber contrast
  int smoothing_radius = 0;       // box pre-filter on the resized luma, 0 disables

  void validate() const;
};

struct MatchResult {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  MatchResult& operator+=(const MatchResult& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

double iou(const BBox& a, const BBox& b) noexcept;

/// Greedy non-max suppression. Output is sorted by descending score, ties in
/// input order.
std::vector<Detection> nms(std::span<const Detection> detections, double iou_threshold);

/// Greedy score-ordered matching of detections to same-class truths.
MatchResult match(std::span<const Detection> detections,
                  std::span<const Annotation> truths, double iou_min = 0.5);

/// Recall over ground truth, tp / (tp + fn). Throws NoGroundTruth when
/// there is none.
double detection_accuracy(std::size_t tp, std::size_t fp, std::size_t fn);

struct AccuracyStats {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};
AccuracyStats accuracy_stats(const MatchResult& m);

// Pascal VOC subset: annotation/object/{name, bndbox/{xmin,ymin,xmax,ymax}}.
// frame_id comes from annotation/filename when present.
std::vector<Annotation> parse_voc(std::string_view xml, std::string_view frame_id = {});
std::string write_voc(std::span<const Annotation> annotations, std::string_view filename,
                      int width, int height);

struct SceneStyle {
  int background_mean = 128;
  int background_jitter = 12;  // per-scene mean offset, +-
  int blob_amplitude = 18;  // low-frequency texture, +-
  int blob_cell = 32;       // texture correlation length
  int noise_amplitude = 6;  // per-sample uniform noise, +-
  int contrast = 90;        // target = background - contrast
  int min_target_width = 5;
  int max_target_width = 9;
  int min_target_height = 12;
  int max_target_height = 24;
  int margin = 10;          // minimum gap between targets and frame border
};

struct Scene {
  Frame frame;
  std::vector<Annotation> annotations;
};

/// Textured background with `n_targets` non-overlapping dark rectangles.
/// Throws TooManyTargets if they cannot be placed.
Scene synthesize_scene(std::uint64_t seed, int n_targets, int width, int height,
                       const SceneStyle& style = {}, std::string_view frame_id = {});

/// Extension point for detection models.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::vector<Detection> detect(const Frame& frame) const = 0;
};

/// Weber-contrast blob detector. Resizes to input_size^2 (nearest neighbour),
/// estimates the background with a box mean, keeps connected dark components
/// whose contrast (bg - luma) / max(bg, floor) exceeds `contrast_threshold`,
/// scores them by mean contrast and applies NMS. Boxes are returned in the
/// input frame's coordinates.
std::vector<Detection> contrast_detector(const Frame& frame, const DetectorConfig& cfg,
                                         double contrast_threshold);

class ContrastDetector final : public Detector {
 public:
  ContrastDetector(DetectorConfig cfg, double contrast_threshold)
      : cfg_(cfg), threshold_(contrast_threshold) {}

  std::vector<Detection> detect(const Frame& frame) const override {
    return contrast_detector(frame, cfg_, threshold_);
  }
  double threshold() const noexcept { return threshold_; }

 private:
  DetectorConfig cfg_;
  double threshold_;
};

/// Candidate thresholds searched when fitting a detector.
std::vector<double> contrast_threshold_grid();

/// Picks the grid threshold with the highest pooled recall on the labelled
/// frames, breaking ties by F1 and then by the middle of the tied run.
double fit_contrast_threshold(std::span<const Frame> frames,
                              std::span<const std::vector<Annotation>> truths,
                              const DetectorConfig& cfg);

}  // namespace eblc
