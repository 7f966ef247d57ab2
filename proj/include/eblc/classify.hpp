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

#include <array>
#include <limits>
#include <span>
#include <vector>

#include "eblc/condition.hpp"
#include "eblc/frame.hpp"

namespace eblc {

/// Soft class weights indexed by EnvCondition. The shipped classifier emits
/// one-hot vectors; the type leaves room for soft outputs.
class ClassProbabilities {
 public:
  ClassProbabilities() = default;
  /// Throws InvalidArgument unless non-negative and summing to 1 (1e-9).
  explicit ClassProbabilities(const std::array<double, kConditionCount>& weights);

  static ClassProbabilities one_hot(EnvCondition c);

  const std::array<double, kConditionCount>& weights() const noexcept { return weights_; }
  double operator[](EnvCondition c) const noexcept { return weights_[index_of(c)]; }
  /// Largest weight; ties go to the earliest condition in enum order.
  EnvCondition argmax() const noexcept;

 private:
  std::array<double, kConditionCount> weights_{1.0, 0, 0, 0, 0, 0, 0};
};

struct FeatureVector {
  double mean_lightness = 0.0;    // HSL lightness, [0,1]
  double lightness_stddev = 0.0;  // [0,1]
  double streak_energy = 0.0;     // mean ridge response above the noise floor
  double sharpness = 0.0;         // variance of the 3x3 Laplacian of luma
};

struct FeatureParams {
  int ridge_distance = 4;            // one-sided difference offset, pixels
  double ridge_noise_multiple = 3.0; // ridge floor as a multiple of the noise estimate
  double ridge_floor = 0.5;          // lower bound on the floor, luma units
};

/// Needs a frame of at least 8x8 (FrameTooSmall).
FeatureVector extract_features(const Frame& frame, const FeatureParams& params = {});

/// Half-open feature interval [lower, upper) assigned to one condition.
struct Band {
  EnvCondition condition = EnvCondition::Normal;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

/// Decision ladder: a frame is rain when streak_energy >= rain_streak_min and
/// sharpness < rain_sharpness_max, and its severity is then binned by
/// sharpness over rain_bands (blur grows with severity, while the streak
/// response of heavily blurred rain is weaker than that of moderate rain).
/// Other frames are binned by mean_lightness over light_bands (Normal and the
/// three darkness classes).
struct ClassifierConfig {
  FeatureParams features;
  double rain_streak_min = std::numeric_limits<double>::infinity();
  double rain_sharpness_max = std::numeric_limits<double>::infinity();
  std::vector<Band> rain_bands;
  std::vector<Band> light_bands;

  bool calibrated() const noexcept { return !rain_bands.empty() && !light_bands.empty(); }
};

/// Throws UncalibratedThresholds when `config` has no bands.
ClassProbabilities classify(const FeatureVector& v, const ClassifierConfig& config);

struct LabeledFrame {
  const Frame* frame = nullptr;
  EnvCondition condition = EnvCondition::Normal;
};

inline constexpr std::size_t kMinSamplesPerClass = 10;

/// Band edges are midpoints between adjacent per-class feature means, so the
/// result does not depend on corpus order. Throws InsufficientSamples naming
/// the first class with fewer than kMinSamplesPerClass frames.
ClassifierConfig calibrate_thresholds(std::span<const LabeledFrame> corpus,
                                      const FeatureParams& params = {});
/// Same, from precomputed features.
ClassifierConfig calibrate_thresholds(std::span<const FeatureVector> features,
                                      std::span<const EnvCondition> labels,
                                      const FeatureParams& params = {});

/// Extension point for condition classifiers.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual ClassProbabilities classify(const Frame& frame) const = 0;
};

class ThresholdClassifier final : public Classifier {
 public:
  explicit ThresholdClassifier(ClassifierConfig config);
  ClassProbabilities classify(const Frame& frame) const override;
  const ClassifierConfig& config() const noexcept { return config_; }

 private:
  ClassifierConfig config_;
};

}  // namespace eblc
