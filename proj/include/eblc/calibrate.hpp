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
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "eblc/augment.hpp"
#include "eblc/codec.hpp"
#include "eblc/condition.hpp"
#include "eblc/detect.hpp"

namespace eblc {

struct CalibrationConfig {
  double accuracy_threshold = 0.97;
  std::vector<int> coarse_grid{10, 20, 30, 40, 50, 51};
  int crf_min = kMinCrf;
  int crf_max = kMaxCrf;
  std::string corpus_ref;
  std::string detector_ref = "contrast";

  /// Throws InvalidArgument on a threshold outside (0,1] or a grid that is
  /// not strictly increasing within [crf_min, crf_max].
  void validate() const;
};

using AccuracyCurve = std::function<double(int crf)>;

/// Walks the coarse grid until the first point below threshold, then scans
/// every integer CRF between the last valid grid point and that failure.
/// A failing first grid point scans [crf_min, first point); a grid with no
/// failure scans above its last point up to crf_max. nullopt when even
/// crf_min fails.
std::optional<int> coarse_to_fine_search(const AccuracyCurve& eval, const CalibrationConfig& cfg);

/// Evaluates every CRF in [crf_min, crf_max] and returns the largest valid one.
std::optional<int> exhaustive_oracle(const AccuracyCurve& eval, const CalibrationConfig& cfg);

/// One calibrated detector: a contrast threshold fitted for (condition, crf).
struct DetectorModel {
  std::string id;
  EnvCondition condition = EnvCondition::Normal;
  int crf = 0;
  double contrast_threshold = 0.0;
};

std::string model_id(EnvCondition condition, int crf);

class DetectorLibrary {
 public:
  void add(DetectorModel model);
  bool contains(EnvCondition condition, int crf) const;
  /// Throws MissingModel.
  const DetectorModel& get(EnvCondition condition, int crf) const;
  /// Sorted by condition, then crf.
  std::vector<DetectorModel> models() const;
  bool empty() const noexcept { return models_.empty(); }

 private:
  std::map<std::pair<int, int>, DetectorModel> models_;
};

/// Clear-weather annotated frames, split into a fitting half and a disjoint
/// evaluation half.
struct CalibrationCorpus {
  std::vector<Frame> fit_frames;
  std::vector<std::vector<Annotation>> fit_truths;
  std::vector<Frame> eval_frames;
  std::vector<std::vector<Annotation>> eval_truths;
  std::uint64_t seed = 0;  // drives augmentation

  /// Alternating split of an annotated sequence: even indices fit, odd evaluate.
  static CalibrationCorpus split(std::vector<Frame> frames,
                                 std::vector<std::vector<Annotation>> truths,
                                 std::uint64_t seed);
  /// Hash of every sample, annotation and the seed.
  std::string hash() const;
};

struct PointResult {
  EnvCondition condition = EnvCondition::Normal;
  int crf = 0;
  double accuracy = 0.0;   // recall on the evaluation half
  double precision = 0.0;
  double f1 = 0.0;
  double psnr = 0.0;       // segment PSNR of the decoded evaluation half
  DetectorModel model;
};

/// Memoized evaluate_point over one corpus, codec and detector family.
/// Safe to call from several threads.
class PointEvaluator {
 public:
  PointEvaluator(const CalibrationCorpus& corpus, const Encoder& codec,
                 DetectorConfig detector = {}, SeverityTable severities = {});

  /// Augments both halves to `condition`, encodes and decodes them at `crf`,
  /// fits the detector threshold on the fitting half and measures recall and
  /// PSNR on the evaluation half.
  PointResult evaluate(EnvCondition condition, int crf);

  /// Distinct points computed so far (memo hits excluded).
  std::size_t evaluations() const;
  std::vector<PointResult> results() const;  // sorted by condition, crf
  const std::string& corpus_hash() const noexcept { return corpus_hash_; }
  const DetectorConfig& detector_config() const noexcept { return detector_; }

 private:
  struct Augmented {
    std::vector<Frame> fit;
    std::vector<Frame> eval;
  };
  const Augmented& augmented(EnvCondition condition);

  const CalibrationCorpus& corpus_;
  const Encoder& codec_;
  DetectorConfig detector_;
  SeverityTable severities_;
  std::string corpus_hash_;
  std::string detector_id_;

  mutable std::mutex mutex_;
  std::map<std::tuple<int, int, std::string, std::string>, PointResult> memo_;
  std::array<std::once_flag, kConditionCount> augment_once_;
  std::array<Augmented, kConditionCount> augment_cache_;
};

/// Seed of augmented frame `index` of a split under `condition`.
std::uint64_t augment_seed(std::uint64_t corpus_seed, EnvCondition condition, bool eval_split,
                           std::size_t index);

struct ReferenceTableEntry {
  EnvCondition condition = EnvCondition::Normal;
  std::optional<int> max_crf;      // nullopt: no CRF meets the threshold
  double min_psnr = 0.0;           // measured at max_crf
  std::string model_id;
  double accuracy_at_max = 0.0;

  /// CRF the controller runs at: max_crf, or lossless when none is valid.
  int operating_crf() const noexcept { return max_crf.value_or(kMinCrf); }
};

struct Provenance {
  std::string config_hash;
  std::string corpus_hash;
  std::string timestamp;
};

struct ReferenceTable {
  std::vector<ReferenceTableEntry> entries;  // one per condition, enum order
  DetectorConfig detector;
  DetectorLibrary models;
  Provenance provenance;

  /// Throws IncompleteTable unless there is exactly one entry per condition.
  void validate() const;
  /// Throws IncompleteTable when the condition has no entry.
  const ReferenceTableEntry& at(EnvCondition condition) const;
};

/// Runs the search for every condition (in parallel) and assembles the table.
/// Entries without a valid CRF carry the lossless measurement.
ReferenceTable build_reference_table(const CalibrationConfig& cfg, PointEvaluator& evaluator,
                                     Provenance provenance);

/// condition,crf,accuracy,psnr rows for every evaluated point.
std::string evaluation_log_csv(const std::vector<PointResult>& results);

}  // namespace eblc
