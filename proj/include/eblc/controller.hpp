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
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eblc/calibrate.hpp"
#include "eblc/classify.hpp"
#include "eblc/codec.hpp"
#include "eblc/detect.hpp"

namespace eblc {

struct ControllerConfig {
  int classify_every = 10;  // frames between classifications (1 s at 10 fps)
  int vote_window = 3;      // argmax votes kept for the majority rule
  double fps = 10.0;

  void validate() const;
};

struct ControllerState {
  EnvCondition active_condition = EnvCondition::Normal;
  int active_crf = 0;
  std::string active_model_id;
  int frames_since_classify = 0;  // frames coded since the last classification
  std::deque<EnvCondition> classify_window;  // oldest first
};

struct StepReport {
  std::string frame_id;
  EnvCondition condition = EnvCondition::Normal;  // condition the frame was coded under
  int crf = 0;
  std::string model_id;
  double psnr = 0.0;
  std::size_t detections = 0;
  std::optional<double> accuracy;     // when annotations are supplied
  std::optional<MatchResult> counts;  // idem
  std::uint64_t raw_bits = 0;
  std::uint64_t compressed_bits = 0;
  double bandwidth_reduction = 0.0;
  bool classified = false;            // a classification ran on this frame
  bool classifier_fault = false;      // it failed and the condition was kept
  bool switched = false;              // a switch was decided on this frame
};

/// raw_bits / compressed_bits. Throws ZeroCompressedSize.
double bandwidth_reduction(double raw_bits, double compressed_bits);

/// Uncompressed 24-bit RGB size of a frame.
std::uint64_t raw_frame_bits(const Frame& frame);

/// Feedback loop: classify every N-th frame, switch condition on a strict
/// majority of the last M votes, code the frame at the table CRF of the
/// active condition and detect with the matching calibrated model. A switch
/// takes effect from the next frame.
class Controller {
 public:
  Controller(const ReferenceTable& table, const Classifier& classifier, const Encoder& codec,
             ControllerConfig config = {});

  /// Classifies `first` to pick the starting condition; that vote seeds the
  /// window. A classifier failure here starts from Normal.
  ControllerState initial_state(const Frame& first) const;

  std::pair<StepReport, ControllerState> step(const Frame& frame, std::string frame_id,
                                              const ControllerState& state,
                                              const std::vector<Annotation>* truths) const;

  /// Steps through a whole stream. `truths` is empty or one list per frame.
  std::vector<StepReport> run(std::span<const Frame> frames, std::span<const std::string> ids,
                              std::span<const std::vector<Annotation>> truths) const;

 private:
  ControllerState enter(EnvCondition condition, ControllerState state) const;

  const ReferenceTable& table_;
  const Classifier& classifier_;
  const Encoder& codec_;
  ControllerConfig config_;
};

/// Codes one frame at `crf`, detects with `threshold` and fills a report.
StepReport code_and_detect(const Frame& frame, std::string frame_id, EnvCondition condition,
                           int crf, const DetectorModel& model, const DetectorConfig& detector,
                           const Encoder& codec, const std::vector<Annotation>* truths);

/// Same pipeline with classification disabled and the CRF pinned; every frame
/// is detected with `model` and reported under `condition`.
std::vector<StepReport> run_static_baseline(std::span<const Frame> frames,
                                            std::span<const std::string> ids,
                                            std::span<const std::vector<Annotation>> truths,
                                            int fixed_crf, const DetectorModel& model,
                                            const DetectorConfig& detector, const Encoder& codec,
                                            EnvCondition condition = EnvCondition::Normal);

}  // namespace eblc
