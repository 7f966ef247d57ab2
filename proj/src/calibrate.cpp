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

#include "eblc/calibrate.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "eblc/error.hpp"
#include "eblc/io.hpp"
#include "eblc/metrics.hpp"
#include "eblc/rng.hpp"

namespace eblc {
namespace {

std::string detector_identity(const DetectorConfig& d) {
  std::ostringstream out;
  out << "contrast:" << d.input_size << ':' << d.nms_iou_threshold << ':' << d.score_threshold
      << ':' << d.background_radius << ':' << d.min_area << ':' << d.contrast_floor << ':' << d.smoothing_radius;
  return out.str();
}

}  // namespace

void CalibrationConfig::validate() const {
  if (!(accuracy_threshold > 0.0 && accuracy_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "accuracy_threshold must lie in (0,1]");
  }
  if (crf_min < kMinCrf || crf_max > kMaxCrf || crf_min > crf_max) {
    throw Error(ErrorCode::InvalidArgument, "crf range must lie within [0,51]");
  }
  if (coarse_grid.empty()) throw Error(ErrorCode::InvalidArgument, "coarse_grid is empty");
  for (std::size_t i = 0; i < coarse_grid.size(); ++i) {
    const int g = coarse_grid[i];
    if (g < crf_min || g > crf_max || (i > 0 && g <= coarse_grid[i - 1])) {
      throw Error(ErrorCode::InvalidArgument,
                  "coarse_grid must be strictly increasing within [crf_min, crf_max]");
    }
  }
}

std::optional<int> coarse_to_fine_search(const AccuracyCurve& eval, const CalibrationConfig& cfg) {
  cfg.validate();
  auto valid = [&](int crf) { return eval(crf) >= cfg.accuracy_threshold; };

  std::optional<int> last_valid;
  std::optional<int> first_invalid;
  for (const int g : cfg.coarse_grid) {
    if (!valid(g)) {
      first_invalid = g;
      break;
    }
    last_valid = g;
  }

  const int lo = last_valid ? *last_valid + 1 : cfg.crf_min;
  const int hi = first_invalid ? *first_invalid - 1 : cfg.crf_max;
  std::optional<int> best = last_valid;
  for (int crf = lo; crf <= hi; ++crf) {
    if (valid(crf)) best = crf;
  }
  return best;
}

std::optional<int> exhaustive_oracle(const AccuracyCurve& eval, const CalibrationConfig& cfg) {
  cfg.validate();
  std::optional<int> best;
  for (int crf = cfg.crf_min; crf <= cfg.crf_max; ++crf) {
    if (eval(crf) >= cfg.accuracy_threshold) best = crf;
  }
  return best;
}

std::string model_id(EnvCondition condition, int crf) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "contrast/%s/crf%02d", std::string(to_string(condition)).c_str(),
                crf);
  return buf;
}

void DetectorLibrary::add(DetectorModel model) {
  const auto key = std::make_pair(static_cast<int>(model.condition), model.crf);
  models_.insert_or_assign(key, std::move(model));
}

bool DetectorLibrary::contains(EnvCondition condition, int crf) const {
  return models_.count({static_cast<int>(condition), crf}) > 0;
}

const DetectorModel& DetectorLibrary::get(EnvCondition condition, int crf) const {
  const auto it = models_.find({static_cast<int>(condition), crf});
  if (it == models_.end()) throw Error(ErrorCode::MissingModel, model_id(condition, crf));
  return it->second;
}

std::vector<DetectorModel> DetectorLibrary::models() const {
  std::vector<DetectorModel> out;
  out.reserve(models_.size());
  for (const auto& [key, m] : models_) out.push_back(m);
  return out;
}

CalibrationCorpus CalibrationCorpus::split(std::vector<Frame> frames,
                                           std::vector<std::vector<Annotation>> truths,
                                           std::uint64_t seed) {
  if (frames.size() != truths.size()) {
    throw Error(ErrorCode::InvalidArgument, "one annotation list per frame is required");
  }
  if (frames.size() < 2) {
    throw Error(ErrorCode::InsufficientSamples, "calibration corpus needs at least 2 frames");
  }
  CalibrationCorpus c;
  c.seed = seed;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    auto& f = i % 2 == 0 ? c.fit_frames : c.eval_frames;
    auto& t = i % 2 == 0 ? c.fit_truths : c.eval_truths;
    f.push_back(std::move(frames[i]));
    t.push_back(std::move(truths[i]));
  }
  return c;
}

std::string CalibrationCorpus::hash() const {
  Fnv1a h;
  auto add_split = [&](const std::vector<Frame>& frames,
                       const std::vector<std::vector<Annotation>>& truths) {
    for (std::size_t i = 0; i < frames.size(); ++i) {
      h.update(std::to_string(frames[i].width()) + "x" + std::to_string(frames[i].height()));
      h.update(frames[i].samples());
      for (const Annotation& a : truths[i]) {
        std::ostringstream box;
        box << a.class_label << ':' << a.box.x_min << ',' << a.box.y_min << ',' << a.box.x_max
            << ',' << a.box.y_max << ';';
        h.update(box.str());
      }
    }
  };
  add_split(fit_frames, fit_truths);
  h.update("|");
  add_split(eval_frames, eval_truths);
  h.update("seed=" + std::to_string(seed));
  return h.hex();
}

std::uint64_t augment_seed(std::uint64_t corpus_seed, EnvCondition condition, bool eval_split,
                           std::size_t index) {
  const std::uint64_t stream =
      (static_cast<std::uint64_t>(index_of(condition)) << 40) |
      (static_cast<std::uint64_t>(eval_split) << 32) | static_cast<std::uint64_t>(index);
  return mix_seed(corpus_seed, stream);
}

PointEvaluator::PointEvaluator(const CalibrationCorpus& corpus, const Encoder& codec,
                               DetectorConfig detector, SeverityTable severities)
    : corpus_(corpus),
      codec_(codec),
      detector_(detector),
      severities_(std::move(severities)),
      corpus_hash_(corpus.hash()),
      detector_id_(detector_identity(detector)) {
  detector_.validate();
  if (corpus_.fit_frames.empty() || corpus_.eval_frames.empty()) {
    throw Error(ErrorCode::InsufficientSamples, "calibration corpus has an empty split");
  }
}

const PointEvaluator::Augmented& PointEvaluator::augmented(EnvCondition condition) {
  const std::size_t k = index_of(condition);
  std::call_once(augment_once_[k], [&] {
    Augmented& a = augment_cache_[k];
    auto run = [&](const std::vector<Frame>& in, std::vector<Frame>& out, bool eval_split) {
      out.resize(in.size());
      for (std::size_t i = 0; i < in.size(); ++i) {
        const Severity s =
            severities_.get(condition, augment_seed(corpus_.seed, condition, eval_split, i));
        out[i] = synthesize(in[i], s);
      }
    };
    run(corpus_.fit_frames, a.fit, false);
    run(corpus_.eval_frames, a.eval, true);
  });
  return augment_cache_[k];
}

PointResult PointEvaluator::evaluate(EnvCondition condition, int crf) {
  const auto key = std::make_tuple(static_cast<int>(condition), crf, corpus_hash_, detector_id_);
  {
    std::lock_guard lock(mutex_);
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
  }

  const Augmented& a = augmented(condition);
  const std::vector<Frame> fit = codec_.decode(codec_.encode(a.fit, crf));
  const std::vector<Frame> eval = codec_.decode(codec_.encode(a.eval, crf));

  PointResult r;
  r.condition = condition;
  r.crf = crf;
  r.model.id = model_id(condition, crf);
  r.model.condition = condition;
  r.model.crf = crf;
  r.model.contrast_threshold = fit_contrast_threshold(fit, corpus_.fit_truths, detector_);

  std::vector<MatchResult> per_frame(eval.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < eval.size(); ++i) {
    per_frame[i] = match(contrast_detector(eval[i], detector_, r.model.contrast_threshold),
                         corpus_.eval_truths[i]);
  }
  MatchResult pooled;
  for (const MatchResult& m : per_frame) pooled += m;
  const AccuracyStats stats = accuracy_stats(pooled);
  r.accuracy = stats.recall;
  r.precision = stats.precision;
  r.f1 = stats.f1;
  r.psnr = segment_psnr(a.eval, eval);

  std::lock_guard lock(mutex_);
  return memo_.emplace(key, std::move(r)).first->second;
}

std::size_t PointEvaluator::evaluations() const {
  std::lock_guard lock(mutex_);
  return memo_.size();
}

std::vector<PointResult> PointEvaluator::results() const {
  std::lock_guard lock(mutex_);
  std::vector<PointResult> out;
  out.reserve(memo_.size());
  for (const auto& [key, r] : memo_) out.push_back(r);
  return out;
}

void ReferenceTable::validate() const {
  if (entries.size() != kConditionCount) {
    throw Error(ErrorCode::IncompleteTable, "reference table has " +
                                                std::to_string(entries.size()) +
                                                " entries, need " +
                                                std::to_string(kConditionCount));
  }
  for (const EnvCondition c : kAllConditions) {
    const auto n = std::count_if(entries.begin(), entries.end(),
                                 [&](const ReferenceTableEntry& e) { return e.condition == c; });
    if (n != 1) {
      throw Error(ErrorCode::IncompleteTable,
                  std::string(to_string(c)) + " has " + std::to_string(n) + " entries");
    }
  }
}

const ReferenceTableEntry& ReferenceTable::at(EnvCondition condition) const {
  for (const ReferenceTableEntry& e : entries) {
    if (e.condition == condition) return e;
  }
  throw Error(ErrorCode::IncompleteTable, "no entry for " + std::string(to_string(condition)));
}

ReferenceTable build_reference_table(const CalibrationConfig& cfg, PointEvaluator& evaluator,
                                     Provenance provenance) {
  cfg.validate();
  ReferenceTable table;
  table.detector = evaluator.detector_config();
  table.provenance = std::move(provenance);
  table.entries.resize(kConditionCount);

  // Errors cannot cross the OpenMP region, so each slot keeps its own.
  std::array<std::exception_ptr, kConditionCount> failures;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < kConditionCount; ++k) {
    try {
      const EnvCondition c = kAllConditions[k];
      const auto curve = [&](int crf) { return evaluator.evaluate(c, crf).accuracy; };
      const std::optional<int> max_crf = coarse_to_fine_search(curve, cfg);
      const PointResult at = evaluator.evaluate(c, max_crf.value_or(cfg.crf_min));
      ReferenceTableEntry& e = table.entries[k];
      e.condition = c;
      e.max_crf = max_crf;
      e.min_psnr = at.psnr;
      e.model_id = at.model.id;
      e.accuracy_at_max = at.accuracy;
    } catch (...) {
      failures[k] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  for (const PointResult& r : evaluator.results()) table.models.add(r.model);
  table.validate();
  return table;
}

std::string evaluation_log_csv(const std::vector<PointResult>& results) {
  std::vector<const PointResult*> sorted;
  for (const PointResult& r : results) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const PointResult* a, const PointResult* b) {
    return index_of(a->condition) != index_of(b->condition)
               ? index_of(a->condition) < index_of(b->condition)
               : a->crf < b->crf;
  });
  std::ostringstream out;
  out << "condition,crf,accuracy,psnr\n";
  for (const PointResult* r : sorted) {
    char line[128];
    if (is_infinite_psnr(r->psnr)) {
      std::snprintf(line, sizeof line, "%s,%d,%.6f,inf\n",
                    std::string(to_string(r->condition)).c_str(), r->crf, r->accuracy);
    } else {
      std::snprintf(line, sizeof line, "%s,%d,%.6f,%.4f\n",
                    std::string(to_string(r->condition)).c_str(), r->crf, r->accuracy, r->psnr);
    }
    out << line;
  }
  return out.str();
}

}  // namespace eblc
