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

#include "eblc/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "eblc/error.hpp"
#include "eblc/kernels.hpp"

namespace eblc {
namespace {

constexpr double kProbabilityTolerance = 1e-9;

struct ClassMeans {
  double mean_lightness = 0.0;
  double streak_energy = 0.0;
  double sharpness = 0.0;
};

// Sorted before summing so the mean is independent of sample order.
double order_free_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return std::accumulate(values.begin(), values.end(), 0.0) / values.size();
}

// Bands over one feature: classes sorted by mean, edges at midpoints.
std::vector<Band> midpoint_bands(std::vector<std::pair<double, EnvCondition>> means) {
  std::sort(means.begin(), means.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : index_of(a.second) < index_of(b.second);
  });
  std::vector<Band> bands(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) {
    bands[i].condition = means[i].second;
    if (i > 0) bands[i].lower = bands[i - 1].upper;
    if (i + 1 < means.size()) bands[i].upper = 0.5 * (means[i].first + means[i + 1].first);
  }
  return bands;
}

EnvCondition locate(const std::vector<Band>& bands, double value) {
  for (const Band& b : bands) {
    if (value < b.upper) return b.condition;
  }
  return bands.back().condition;
}

// Robust per-pixel noise estimate: for white noise of deviation s the 3x3
// Laplacian has deviation s * sqrt(20), and median |x| = 0.6745 * deviation.
double noise_sigma(std::span<const double> luma, int w, int h) {
  std::vector<double> mags;
  mags.reserve(static_cast<std::size_t>(w - 2) * (h - 2));
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const std::size_t k = static_cast<std::size_t>(y) * w + x;
      mags.push_back(std::abs(luma[k - 1] + luma[k + 1] + luma[k - w] + luma[k + w] - 4.0 * luma[k]));
    }
  }
  auto mid = mags.begin() + mags.size() / 2;
  std::nth_element(mags.begin(), mid, mags.end());
  return *mid / (0.6745 * std::sqrt(20.0));
}

}  // namespace

ClassProbabilities::ClassProbabilities(const std::array<double, kConditionCount>& weights)
    : weights_(weights) {
  double sum = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "class weights must be non-negative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    throw Error(ErrorCode::InvalidArgument,
                "class weights must sum to 1, got " + std::to_string(sum));
  }
}

ClassProbabilities ClassProbabilities::one_hot(EnvCondition c) {
  std::array<double, kConditionCount> w{};
  w[index_of(c)] = 1.0;
  return ClassProbabilities(w);
}

EnvCondition ClassProbabilities::argmax() const noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kConditionCount; ++i) {
    if (weights_[i] > weights_[best]) best = i;
  }
  return kAllConditions[best];
}

FeatureVector extract_features(const Frame& frame, const FeatureParams& params) {
  const int w = frame.width();
  const int h = frame.height();
  if (w < 8 || h < 8) {
    throw Error(ErrorCode::FrameTooSmall, "feature extraction needs at least 8x8, got " +
                                              std::to_string(w) + "x" + std::to_string(h));
  }
  FeatureVector v;
  const kernels::Moments light = kernels::parallel::lightness_moments(frame.samples());
  v.mean_lightness = light.mean;
  v.lightness_stddev = std::sqrt(light.variance);

  std::vector<double> plane(frame.pixel_count());
  kernels::parallel::luma_plane(frame.samples(), plane);
  const double sigma = noise_sigma(plane, w, h);
  const double floor = std::max(params.ridge_floor, params.ridge_noise_multiple * sigma);
  v.streak_energy = kernels::parallel::ridge_energy(plane, w, h, params.ridge_distance, floor);
  v.sharpness = kernels::parallel::laplacian_moments(plane, w, h).variance;
  return v;
}

ClassProbabilities classify(const FeatureVector& v, const ClassifierConfig& config) {
  if (!config.calibrated()) {
    throw Error(ErrorCode::UncalibratedThresholds, "classifier bands are missing");
  }
  const bool rain =
      v.streak_energy >= config.rain_streak_min && v.sharpness < config.rain_sharpness_max;
  return ClassProbabilities::one_hot(rain ? locate(config.rain_bands, v.sharpness)
                                          : locate(config.light_bands, v.mean_lightness));
}

ClassifierConfig calibrate_thresholds(std::span<const LabeledFrame> corpus,
                                      const FeatureParams& params) {
  std::vector<FeatureVector> features(corpus.size());
  std::vector<EnvCondition> labels(corpus.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    features[i] = extract_features(*corpus[i].frame, params);
    labels[i] = corpus[i].condition;
  }
  return calibrate_thresholds(features, labels, params);
}

ClassifierConfig calibrate_thresholds(std::span<const FeatureVector> features,
                                      std::span<const EnvCondition> labels,
                                      const FeatureParams& params) {
  if (features.size() != labels.size()) {
    throw Error(ErrorCode::InvalidArgument, "one label per feature vector is required");
  }
  std::array<std::vector<const FeatureVector*>, kConditionCount> by_class;
  for (std::size_t i = 0; i < features.size(); ++i) {
    by_class[index_of(labels[i])].push_back(&features[i]);
  }
  std::array<ClassMeans, kConditionCount> means;
  for (const EnvCondition c : kAllConditions) {
    const auto& members = by_class[index_of(c)];
    if (members.size() < kMinSamplesPerClass) {
      throw Error(ErrorCode::InsufficientSamples,
                  std::string(to_string(c)) + " has " + std::to_string(members.size()) +
                      " frames, need " + std::to_string(kMinSamplesPerClass));
    }
    auto column = [&](double FeatureVector::*field) {
      std::vector<double> values;
      values.reserve(members.size());
      for (const FeatureVector* f : members) values.push_back(f->*field);
      return order_free_mean(std::move(values));
    };
    means[index_of(c)] = {column(&FeatureVector::mean_lightness),
                          column(&FeatureVector::streak_energy),
                          column(&FeatureVector::sharpness)};
  }

  ClassifierConfig config;
  config.features = params;

  double dry_streak_max = -std::numeric_limits<double>::infinity();
  double rain_streak_min = std::numeric_limits<double>::infinity();
  double rain_sharpness_max = -std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, EnvCondition>> rain_means, light_means;
  for (const EnvCondition c : kAllConditions) {
    const ClassMeans& m = means[index_of(c)];
    if (is_rain(c)) {
      rain_streak_min = std::min(rain_streak_min, m.streak_energy);
      rain_sharpness_max = std::max(rain_sharpness_max, m.sharpness);
      rain_means.emplace_back(m.sharpness, c);
    } else {
      dry_streak_max = std::max(dry_streak_max, m.streak_energy);
      light_means.emplace_back(m.mean_lightness, c);
    }
  }
  config.rain_streak_min = 0.5 * (dry_streak_max + rain_streak_min);
  // The blur gate only helps when rain frames are softer than clear ones.
  const double normal_sharpness = means[index_of(EnvCondition::Normal)].sharpness;
  if (rain_sharpness_max < normal_sharpness) {
    config.rain_sharpness_max = 0.5 * (normal_sharpness + rain_sharpness_max);
  }
  config.rain_bands = midpoint_bands(std::move(rain_means));
  config.light_bands = midpoint_bands(std::move(light_means));
  return config;
}

ThresholdClassifier::ThresholdClassifier(ClassifierConfig config) : config_(std::move(config)) {
  if (!config_.calibrated()) {
    throw Error(ErrorCode::UncalibratedThresholds, "classifier bands are missing");
  }
}

ClassProbabilities ThresholdClassifier::classify(const Frame& frame) const {
  return eblc::classify(extract_features(frame, config_.features), config_);
}

}  // namespace eblc
