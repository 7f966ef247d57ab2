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

#include "eblc/serialize.hpp"

#include <cmath>
#include <limits>

#include "eblc/error.hpp"
#include "eblc/metrics.hpp"

namespace eblc {
namespace {

// Reads `key` into `v` when present; absent keys keep their defaults.
template <typename T>
void maybe(const Json& j, const char* key, T& v) {
  if (const auto it = j.find(key); it != j.end()) it->get_to(v);
}

Json bound_to_json(double v) { return std::isinf(v) ? Json(nullptr) : Json(v); }

double bound_from_json(const Json& j, double unbounded) {
  return j.is_null() ? unbounded : j.get<double>();
}

template <typename F>
auto malformed_guard(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedReport, std::string(what) + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedReport) throw;
    throw Error(ErrorCode::MalformedReport, std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json parse_json(std::string_view text, std::string_view what, ErrorCode code) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(code, std::string(what) + ": " + e.what());
  }
}

Json decibels_to_json(double db) {
  if (is_infinite_psnr(db)) return "inf";
  return db;
}

double decibels_from_json(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInfinitePsnr;
  return j.get<double>();
}

void to_json(Json& j, EnvCondition c) { j = std::string(to_string(c)); }
void from_json(const Json& j, EnvCondition& c) { c = parse_condition(j.get<std::string>()); }

void to_json(Json& j, const DetectorConfig& c) {
  j = Json{{"input_size", c.input_size},
           {"nms_iou_threshold", c.nms_iou_threshold},
           {"score_threshold", c.score_threshold},
           {"background_radius", c.background_radius},
           {"min_area", c.min_area},
           {"contrast_floor", c.contrast_floor},
           {"smoothing_radius", c.smoothing_radius}};
}

void from_json(const Json& j, DetectorConfig& c) {
  maybe(j, "input_size", c.input_size);
  maybe(j, "nms_iou_threshold", c.nms_iou_threshold);
  maybe(j, "score_threshold", c.score_threshold);
  maybe(j, "background_radius", c.background_radius);
  maybe(j, "min_area", c.min_area);
  maybe(j, "contrast_floor", c.contrast_floor);
  maybe(j, "smoothing_radius", c.smoothing_radius);
  c.validate();
}

void to_json(Json& j, const SceneStyle& s) {
  j = Json{{"background_mean", s.background_mean},
           {"background_jitter", s.background_jitter},
           {"blob_amplitude", s.blob_amplitude},
           {"blob_cell", s.blob_cell},
           {"noise_amplitude", s.noise_amplitude},
           {"contrast", s.contrast},
           {"min_target_width", s.min_target_width},
           {"max_target_width", s.max_target_width},
           {"min_target_height", s.min_target_height},
           {"max_target_height", s.max_target_height},
           {"margin", s.margin}};
}

void from_json(const Json& j, SceneStyle& s) {
  maybe(j, "background_mean", s.background_mean);
  maybe(j, "background_jitter", s.background_jitter);
  maybe(j, "blob_amplitude", s.blob_amplitude);
  maybe(j, "blob_cell", s.blob_cell);
  maybe(j, "noise_amplitude", s.noise_amplitude);
  maybe(j, "contrast", s.contrast);
  maybe(j, "min_target_width", s.min_target_width);
  maybe(j, "max_target_width", s.max_target_width);
  maybe(j, "min_target_height", s.min_target_height);
  maybe(j, "max_target_height", s.max_target_height);
  maybe(j, "margin", s.margin);
}

void to_json(Json& j, const Severity& s) {
  j = Json{{"condition", s.condition},
           {"darkness_factor", s.darkness_factor},
           {"streak_density", s.streak_density},
           {"streak_length", s.streak_length},
           {"blur_radius", s.blur_radius},
           {"seed", s.seed}};
}

void from_json(const Json& j, Severity& s) {
  maybe(j, "condition", s.condition);
  maybe(j, "darkness_factor", s.darkness_factor);
  maybe(j, "streak_density", s.streak_density);
  maybe(j, "streak_length", s.streak_length);
  maybe(j, "blur_radius", s.blur_radius);
  maybe(j, "seed", s.seed);
}

void to_json(Json& j, const CalibrationConfig& c) {
  j = Json{{"accuracy_threshold", c.accuracy_threshold},
           {"coarse_grid", c.coarse_grid},
           {"crf_min", c.crf_min},
           {"crf_max", c.crf_max},
           {"corpus_ref", c.corpus_ref},
           {"detector_ref", c.detector_ref}};
}

void from_json(const Json& j, CalibrationConfig& c) {
  maybe(j, "accuracy_threshold", c.accuracy_threshold);
  maybe(j, "coarse_grid", c.coarse_grid);
  maybe(j, "crf_min", c.crf_min);
  maybe(j, "crf_max", c.crf_max);
  maybe(j, "corpus_ref", c.corpus_ref);
  maybe(j, "detector_ref", c.detector_ref);
  c.validate();
}

void to_json(Json& j, const ControllerConfig& c) {
  j = Json{{"classify_every", c.classify_every}, {"vote_window", c.vote_window}, {"fps", c.fps}};
}

void from_json(const Json& j, ControllerConfig& c) {
  maybe(j, "classify_every", c.classify_every);
  maybe(j, "vote_window", c.vote_window);
  maybe(j, "fps", c.fps);
  c.validate();
}

void to_json(Json& j, const ExternalCodecConfig& c) {
  j = Json{{"enabled", c.enabled},
           {"executable", c.executable},
           {"encode_template", c.encode_template},
           {"decode_template", c.decode_template},
           {"crf_flag_template", c.crf_flag_template},
           {"container", c.container},
           {"fps", c.fps},
           {"scratch_dir", c.scratch_dir.string()}};
}

void from_json(const Json& j, ExternalCodecConfig& c) {
  maybe(j, "enabled", c.enabled);
  maybe(j, "executable", c.executable);
  maybe(j, "encode_template", c.encode_template);
  maybe(j, "decode_template", c.decode_template);
  maybe(j, "crf_flag_template", c.crf_flag_template);
  maybe(j, "container", c.container);
  maybe(j, "fps", c.fps);
  std::string scratch = c.scratch_dir.string();
  maybe(j, "scratch_dir", scratch);
  c.scratch_dir = scratch;
}

void to_json(Json& j, const FeatureParams& p) {
  j = Json{{"ridge_distance", p.ridge_distance},
           {"ridge_noise_multiple", p.ridge_noise_multiple},
           {"ridge_floor", p.ridge_floor}};
}

void from_json(const Json& j, FeatureParams& p) {
  maybe(j, "ridge_distance", p.ridge_distance);
  maybe(j, "ridge_noise_multiple", p.ridge_noise_multiple);
  maybe(j, "ridge_floor", p.ridge_floor);
}

void to_json(Json& j, const FeatureVector& v) {
  j = Json{{"mean_lightness", v.mean_lightness},
           {"lightness_stddev", v.lightness_stddev},
           {"streak_energy", v.streak_energy},
           {"sharpness", v.sharpness}};
}

namespace {

Json bands_to_json(const std::vector<Band>& bands) {
  Json out = Json::array();
  for (const Band& b : bands) {
    out.push_back(Json{{"condition", b.condition},
                       {"lower", bound_to_json(b.lower)},
                       {"upper", bound_to_json(b.upper)}});
  }
  return out;
}

std::vector<Band> bands_from_json(const Json& j) {
  std::vector<Band> out;
  for (const Json& b : j) {
    Band band;
    band.condition = b.at("condition").get<EnvCondition>();
    band.lower = bound_from_json(b.at("lower"), -std::numeric_limits<double>::infinity());
    band.upper = bound_from_json(b.at("upper"), std::numeric_limits<double>::infinity());
    out.push_back(band);
  }
  return out;
}

}  // namespace

void to_json(Json& j, const ClassifierConfig& c) {
  j = Json{{"features", c.features},
           {"rain_streak_min", bound_to_json(c.rain_streak_min)},
           {"rain_sharpness_max", bound_to_json(c.rain_sharpness_max)},
           {"rain_bands", bands_to_json(c.rain_bands)},
           {"light_bands", bands_to_json(c.light_bands)}};
}

void from_json(const Json& j, ClassifierConfig& c) {
  maybe(j, "features", c.features);
  const double inf = std::numeric_limits<double>::infinity();
  c.rain_streak_min = bound_from_json(j.at("rain_streak_min"), inf);
  c.rain_sharpness_max = bound_from_json(j.at("rain_sharpness_max"), inf);
  c.rain_bands = bands_from_json(j.at("rain_bands"));
  c.light_bands = bands_from_json(j.at("light_bands"));
}

void to_json(Json& j, const Detection& d) {
  j = Json{{"x_min", d.box.x_min}, {"y_min", d.box.y_min}, {"x_max", d.box.x_max},
           {"y_max", d.box.y_max}, {"score", d.score},     {"class", d.class_label}};
}

std::string reference_table_to_json(const ReferenceTable& table) {
  table.validate();
  Json entries = Json::array();
  for (const EnvCondition c : kAllConditions) {
    const ReferenceTableEntry& e = table.at(c);
    entries.push_back(Json{{"condition", e.condition},
                           {"max_crf", e.max_crf ? Json(*e.max_crf) : Json(nullptr)},
                           {"min_psnr_db", decibels_to_json(e.min_psnr)},
                           {"model_id", e.model_id},
                           {"accuracy", e.accuracy_at_max}});
  }
  Json models = Json::array();
  for (const DetectorModel& m : table.models.models()) {
    models.push_back(Json{{"id", m.id},
                          {"condition", m.condition},
                          {"crf", m.crf},
                          {"contrast_threshold", m.contrast_threshold}});
  }
  const Json doc{{"entries", entries},
                 {"models", models},
                 {"detector", table.detector},
                 {"provenance",
                  {{"config_hash", table.provenance.config_hash},
                   {"corpus_hash", table.provenance.corpus_hash},
                   {"timestamp", table.provenance.timestamp}}}};
  return doc.dump(2) + "\n";
}

ReferenceTable reference_table_from_json(std::string_view text) {
  return malformed_guard("reference table", [&] {
    const Json doc = parse_json(text, "reference table", ErrorCode::MalformedReport);
    ReferenceTable t;
    for (const Json& e : doc.at("entries")) {
      ReferenceTableEntry entry;
      entry.condition = e.at("condition").get<EnvCondition>();
      if (!e.at("max_crf").is_null()) entry.max_crf = e.at("max_crf").get<int>();
      entry.min_psnr = decibels_from_json(e.at("min_psnr_db"));
      entry.model_id = e.at("model_id").get<std::string>();
      entry.accuracy_at_max = e.at("accuracy").get<double>();
      t.entries.push_back(std::move(entry));
    }
    for (const Json& m : doc.at("models")) {
      DetectorModel model;
      model.id = m.at("id").get<std::string>();
      model.condition = m.at("condition").get<EnvCondition>();
      model.crf = m.at("crf").get<int>();
      model.contrast_threshold = m.at("contrast_threshold").get<double>();
      t.models.add(std::move(model));
    }
    t.detector = doc.at("detector").get<DetectorConfig>();
    const Json& p = doc.at("provenance");
    t.provenance = {p.at("config_hash").get<std::string>(), p.at("corpus_hash").get<std::string>(),
                    p.at("timestamp").get<std::string>()};
    std::sort(t.entries.begin(), t.entries.end(), [](const auto& a, const auto& b) {
      return index_of(a.condition) < index_of(b.condition);
    });
    t.validate();
    return t;
  });
}

std::string classifier_config_to_json(const ClassifierConfig& config) {
  return Json(config).dump(2) + "\n";
}

ClassifierConfig classifier_config_from_json(std::string_view text) {
  const Json doc = parse_json(text, "classifier config");
  try {
    return doc.get<ClassifierConfig>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::UncalibratedThresholds, std::string("classifier config: ") + e.what());
  }
}

std::string step_report_to_json(const StepReport& r) {
  Json j{{"frame_id", r.frame_id},
         {"condition", r.condition},
         {"crf", r.crf},
         {"model_id", r.model_id},
         {"psnr", decibels_to_json(r.psnr)},
         {"detections", r.detections},
         {"accuracy", r.accuracy ? Json(*r.accuracy) : Json(nullptr)},
         {"raw_bits", r.raw_bits},
         {"compressed_bits", r.compressed_bits},
         {"bandwidth_reduction", r.bandwidth_reduction},
         {"classified", r.classified},
         {"classifier_fault", r.classifier_fault},
         {"switched", r.switched}};
  if (r.counts) j["counts"] = Json{{"tp", r.counts->tp}, {"fp", r.counts->fp}, {"fn", r.counts->fn}};
  return j.dump();
}

StepReport step_report_from_json(std::string_view line) {
  return malformed_guard("step report", [&] {
    const Json j = parse_json(line, "step report", ErrorCode::MalformedReport);
    StepReport r;
    r.frame_id = j.at("frame_id").get<std::string>();
    r.condition = j.at("condition").get<EnvCondition>();
    r.crf = j.at("crf").get<int>();
    r.model_id = j.value("model_id", std::string{});
    r.psnr = decibels_from_json(j.at("psnr"));
    r.detections = j.at("detections").get<std::size_t>();
    if (!j.at("accuracy").is_null()) r.accuracy = j.at("accuracy").get<double>();
    r.raw_bits = j.at("raw_bits").get<std::uint64_t>();
    r.compressed_bits = j.at("compressed_bits").get<std::uint64_t>();
    r.bandwidth_reduction = j.at("bandwidth_reduction").get<double>();
    r.classified = j.value("classified", false);
    r.classifier_fault = j.value("classifier_fault", false);
    r.switched = j.value("switched", false);
    if (const auto it = j.find("counts"); it != j.end()) {
      r.counts = MatchResult{it->at("tp").get<std::size_t>(), it->at("fp").get<std::size_t>(),
                             it->at("fn").get<std::size_t>()};
    }
    return r;
  });
}

}  // namespace eblc
