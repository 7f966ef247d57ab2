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

#include "eblc/controller.hpp"

#include <algorithm>
#include <string>

#include "eblc/error.hpp"
#include "eblc/metrics.hpp"

namespace eblc {
namespace {

void check_stream(std::span<const Frame> frames, std::span<const std::string> ids,
                  std::span<const std::vector<Annotation>> truths) {
  if (frames.empty()) throw Error(ErrorCode::EmptySequence, "stream has no frames");
  if (ids.size() != frames.size()) {
    throw Error(ErrorCode::InvalidArgument, "one frame id per frame is required");
  }
  if (!truths.empty() && truths.size() != frames.size()) {
    throw Error(ErrorCode::InvalidArgument, "annotations must cover every frame or none");
  }
}

}  // namespace

void ControllerConfig::validate() const {
  if (classify_every < 1 || vote_window < 1) {
    throw Error(ErrorCode::InvalidArgument, "classify_every and vote_window must be >= 1");
  }
  if (!(fps > 0.0)) throw Error(ErrorCode::InvalidArgument, "fps must be positive");
}

double bandwidth_reduction(double raw_bits, double compressed_bits) {
  if (!(compressed_bits > 0.0)) {
    throw Error(ErrorCode::ZeroCompressedSize, "compressed size must be positive");
  }
  if (!(raw_bits > 0.0)) throw Error(ErrorCode::InvalidArgument, "raw size must be positive");
  return raw_bits / compressed_bits;
}

std::uint64_t raw_frame_bits(const Frame& frame) {
  return static_cast<std::uint64_t>(frame.sample_count()) * 8;
}

StepReport code_and_detect(const Frame& frame, std::string frame_id, EnvCondition condition,
                           int crf, const DetectorModel& model, const DetectorConfig& detector,
                           const Encoder& codec, const std::vector<Annotation>* truths) {
  const std::span<const Frame> one(&frame, 1);
  const CompressedSegment seg = codec.encode(one, crf);
  const std::vector<Frame> decoded = codec.decode(seg);

  StepReport r;
  r.frame_id = std::move(frame_id);
  r.condition = condition;
  r.crf = crf;
  r.model_id = model.id;
  r.psnr = psnr(frame, decoded.front());
  r.raw_bits = raw_frame_bits(frame);
  r.compressed_bits = measure_bitrate(seg, 1.0).bits_total;
  r.bandwidth_reduction =
      bandwidth_reduction(static_cast<double>(r.raw_bits), static_cast<double>(r.compressed_bits));

  const std::vector<Detection> dets =
      contrast_detector(decoded.front(), detector, model.contrast_threshold);
  r.detections = dets.size();
  if (truths && !truths->empty()) {
    const MatchResult m = match(dets, *truths);
    r.counts = m;
    r.accuracy = detection_accuracy(m.tp, m.fp, m.fn);
  }
  return r;
}

Controller::Controller(const ReferenceTable& table, const Classifier& classifier,
                       const Encoder& codec, ControllerConfig config)
    : table_(table), classifier_(classifier), codec_(codec), config_(config) {
  config_.validate();
  table_.validate();
  for (const ReferenceTableEntry& e : table_.entries) {
    table_.models.get(e.condition, e.operating_crf());  // fails early on a gap
  }
}

ControllerState Controller::enter(EnvCondition condition, ControllerState state) const {
  const ReferenceTableEntry& e = table_.at(condition);
  state.active_condition = condition;
  state.active_crf = e.operating_crf();
  state.active_model_id = table_.models.get(condition, state.active_crf).id;
  return state;
}

ControllerState Controller::initial_state(const Frame& first) const {
  EnvCondition c = EnvCondition::Normal;
  ControllerState s;
  try {
    c = classifier_.classify(first).argmax();
    s.classify_window.push_back(c);
  } catch (const Error&) {
    // Nothing better to go on; the first successful vote can still switch.
  }
  // The bootstrap vote stands in for the classification of frame 0, so the
  // first in-loop classification lands on frame N.
  s.frames_since_classify = 0;
  return enter(c, std::move(s));
}

std::pair<StepReport, ControllerState> Controller::step(
    const Frame& frame, std::string frame_id, const ControllerState& state,
    const std::vector<Annotation>* truths) const {
  ControllerState next = state;
  bool classified = false;
  bool fault = false;
  bool switched = false;

  if (state.frames_since_classify >= config_.classify_every) {
    classified = true;
    try {
      next.classify_window.push_back(classifier_.classify(frame).argmax());
      while (next.classify_window.size() > static_cast<std::size_t>(config_.vote_window)) {
        next.classify_window.pop_front();
      }
    } catch (const Error&) {
      fault = true;
    }
    if (!fault) {
      // Strict majority of the full window, not of the votes collected so far.
      for (const EnvCondition c : kAllConditions) {
        if (c == state.active_condition) continue;
        const auto votes = std::count(next.classify_window.begin(), next.classify_window.end(), c);
        if (2 * votes > config_.vote_window) {
          next = enter(c, std::move(next));
          switched = true;
          break;
        }
      }
    }
  }
  next.frames_since_classify = classified ? 1 : state.frames_since_classify + 1;

  // The frame in flight finishes under the profile that was active for it.
  const DetectorModel& model = table_.models.get(state.active_condition, state.active_crf);
  StepReport report = code_and_detect(frame, std::move(frame_id), state.active_condition,
                                      state.active_crf, model, table_.detector, codec_, truths);
  report.classified = classified;
  report.classifier_fault = fault;
  report.switched = switched;
  return {std::move(report), std::move(next)};
}

std::vector<StepReport> Controller::run(std::span<const Frame> frames,
                                        std::span<const std::string> ids,
                                        std::span<const std::vector<Annotation>> truths) const {
  check_stream(frames, ids, truths);
  std::vector<StepReport> reports;
  reports.reserve(frames.size());
  ControllerState state = initial_state(frames.front());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    auto [report, next] = step(frames[i], ids[i], state, truths.empty() ? nullptr : &truths[i]);
    if (i == 0) report.classified = true;
    reports.push_back(std::move(report));
    state = std::move(next);
  }
  return reports;
}

std::vector<StepReport> run_static_baseline(std::span<const Frame> frames,
                                            std::span<const std::string> ids,
                                            std::span<const std::vector<Annotation>> truths,
                                            int fixed_crf, const DetectorModel& model,
                                            const DetectorConfig& detector, const Encoder& codec,
                                            EnvCondition condition) {
  check_stream(frames, ids, truths);
  CompressionProfile(codec.id(), fixed_crf);  // validates the CRF
  std::vector<StepReport> reports(frames.size());
  // Frames are independent here, so they can be coded concurrently.
  std::vector<std::exception_ptr> failures(frames.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < frames.size(); ++i) {
    try {
      reports[i] = code_and_detect(frames[i], ids[i], condition, fixed_crf, model, detector, codec,
                                   truths.empty() ? nullptr : &truths[i]);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return reports;
}

}  // namespace eblc
