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
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eblc/augment.hpp"
#include "eblc/calibrate.hpp"
#include "eblc/classify.hpp"
#include "eblc/codec.hpp"
#include "eblc/controller.hpp"
#include "eblc/detect.hpp"
#include "eblc/serialize.hpp"

namespace eblc {

struct CorpusSpec {
  int frames = 100;
  int width = 320;
  int height = 240;
  int targets = 8;
  SceneStyle style;
};

/// Everything a subcommand needs, loaded from one JSON file. Command-line
/// flags override individual fields.
struct HarnessConfig {
  double fps = 10.0;
  std::uint64_t seed = 0;
  CorpusSpec corpus;
  std::string codec = "builtin";  // or "external"
  ExternalCodecConfig external;
  SeverityTable severities;
  DetectorConfig detector;
  CalibrationConfig calibration;
  ControllerConfig controller;
  FeatureParams features;
  std::filesystem::path output_dir = "out";
  std::string timestamp;  // provenance; empty: SOURCE_DATE_EPOCH, else the epoch

  void validate() const;
  /// Hash of the canonical JSON form.
  std::string hash() const;
};

Json harness_config_to_json(const HarnessConfig& cfg);
/// Throws InvalidArgument, in particular when "seed" is absent.
HarnessConfig harness_config_from_json(std::string_view text);
HarnessConfig load_harness_config(const std::filesystem::path& path);

std::unique_ptr<Encoder> make_codec(const HarnessConfig& cfg);

/// Provenance timestamp: cfg.timestamp, else SOURCE_DATE_EPOCH as UTC, else
/// 1970-01-01T00:00:00Z. Never the wall clock, so outputs stay reproducible.
std::string provenance_timestamp(const HarnessConfig& cfg);

/// Frames with ids and (possibly empty) per-frame annotations.
struct AnnotatedSequence {
  std::vector<Frame> frames;
  std::vector<std::string> ids;
  std::vector<std::vector<Annotation>> truths;  // empty, or one per frame

  bool annotated() const noexcept { return !truths.empty(); }
};

std::string frame_name(std::size_t index);

/// Scene i uses seed mix_seed(seed, i).
AnnotatedSequence generate_corpus(const CorpusSpec& spec, std::uint64_t seed);

/// <dir>/frames/NNNNNN.ppm, <dir>/annotations/NNNNNN.xml and <dir>/manifest.json.
void write_corpus(const std::filesystem::path& dir, const AnnotatedSequence& seq,
                  const Json& manifest);
/// Accepts a corpus directory or a plain directory of .ppm rasters. VOC files
/// are read from `annotations` (or <dir>/annotations) when present.
AnnotatedSequence load_corpus(const std::filesystem::path& dir,
                              const std::optional<std::filesystem::path>& annotations = {});

/// [begin, end) frame ranges with the weather applied to them.
struct ScheduleSegment {
  std::size_t begin = 0;
  std::size_t end = 0;
  EnvCondition condition = EnvCondition::Normal;
};
using Schedule = std::vector<ScheduleSegment>;

Schedule parse_schedule(std::string_view json_text);
std::string schedule_to_json(const Schedule& schedule);
/// Per-frame condition; frames outside every segment are Normal.
std::vector<EnvCondition> schedule_labels(const Schedule& schedule, std::size_t frame_count);
/// Augments each frame to its scheduled condition, seeded per frame.
std::vector<Frame> apply_schedule(std::span<const Frame> frames, const Schedule& schedule,
                                  const SeverityTable& severities, std::uint64_t seed);

/// Every clear frame augmented to all seven conditions, labelled.
struct LabeledCorpus {
  std::vector<Frame> frames;
  std::vector<EnvCondition> labels;
};
LabeledCorpus build_labeled_corpus(std::span<const Frame> clear, const SeverityTable& severities,
                                   std::uint64_t seed);
ClassifierConfig calibrate_classifier(const LabeledCorpus& corpus, const FeatureParams& params);
double classifier_accuracy(const Classifier& classifier, const LabeledCorpus& corpus);

struct CalibrationOutputs {
  ReferenceTable table;
  std::vector<PointResult> evaluations;
  ClassifierConfig classifier;
};

/// Detector calibration and reference table on the alternating split of
/// `corpus`, plus the classifier calibrated on the corpus under all seven
/// conditions.
CalibrationOutputs run_calibration(const HarnessConfig& cfg, const AnnotatedSequence& corpus,
                                   const Encoder& codec);

struct SummaryRow {
  std::size_t frames = 0;
  std::optional<double> mean_accuracy;  // over annotated frames
  double mean_psnr = 0.0;               // finite frames only; inf if none
  double mean_bitrate = 0.0;            // Mbit/s
  double reduction = 0.0;               // sum raw bits / sum compressed bits
};

struct SummaryReport {
  std::map<EnvCondition, SummaryRow> per_condition;
  SummaryRow overall;
  std::size_t switches = 0;
  std::size_t classifier_faults = 0;
};

/// Groups by `labels` (one per report) when given, else by report condition.
/// Throws MalformedReport on an empty stream.
SummaryReport evaluate(std::span<const StepReport> reports, double fps,
                       std::span<const EnvCondition> labels = {});
Json summary_to_json(const SummaryReport& summary);

/// condition,crf,frames,accuracy rows grouped by (condition, crf).
std::string accuracy_by_crf_csv(std::span<const StepReport> reports,
                                std::span<const EnvCondition> labels = {});

std::string reports_to_jsonl(std::span<const StepReport> reports);
/// Throws MalformedReport on an unparsable line or an empty stream.
std::vector<StepReport> reports_from_jsonl(std::string_view text);

}  // namespace eblc
