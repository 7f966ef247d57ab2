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

#include "eblc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <sstream>

#include "eblc/error.hpp"
#include "eblc/io.hpp"
#include "eblc/metrics.hpp"
#include "eblc/rng.hpp"

namespace eblc {
namespace fs = std::filesystem;
namespace {

template <typename T>
void maybe(const Json& j, const char* key, T& v) {
  if (const auto it = j.find(key); it != j.end()) it->get_to(v);
}

// Stream tag separating classifier augmentation from every other seed use.
constexpr std::uint64_t kClassifierStream = 0x636c617373ULL;

std::string format_double(double v, const char* fmt) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

EnvCondition group_of(std::span<const StepReport> reports,
                      std::span<const EnvCondition> labels, std::size_t i) {
  return labels.empty() ? reports[i].condition : labels[i];
}

void check_labels(std::span<const StepReport> reports, std::span<const EnvCondition> labels) {
  if (!labels.empty() && labels.size() != reports.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "schedule covers " + std::to_string(labels.size()) + " frames but there are " +
                    std::to_string(reports.size()) + " reports");
  }
}

// Accumulates one summary row.
struct RowAccumulator {
  std::size_t frames = 0;
  std::size_t annotated = 0;
  double accuracy_sum = 0.0;
  std::size_t finite_psnr = 0;
  double psnr_sum = 0.0;
  double raw_bits = 0.0;
  double compressed_bits = 0.0;

  void add(const StepReport& r) {
    ++frames;
    if (r.accuracy) {
      ++annotated;
      accuracy_sum += *r.accuracy;
    }
    if (!is_infinite_psnr(r.psnr)) {
      ++finite_psnr;
      psnr_sum += r.psnr;
    }
    raw_bits += static_cast<double>(r.raw_bits);
    compressed_bits += static_cast<double>(r.compressed_bits);
  }

  SummaryRow finish(double fps) const {
    SummaryRow row;
    row.frames = frames;
    if (annotated > 0) row.mean_accuracy = accuracy_sum / static_cast<double>(annotated);
    row.mean_psnr = finite_psnr > 0 ? psnr_sum / static_cast<double>(finite_psnr) : kInfinitePsnr;
    row.mean_bitrate = compressed_bits / static_cast<double>(frames) * fps / 1e6;
    row.reduction = bandwidth_reduction(raw_bits, compressed_bits);
    return row;
  }
};

Json row_to_json(const SummaryRow& row) {
  return Json{{"frames", row.frames},
              {"mean_accuracy", row.mean_accuracy ? Json(*row.mean_accuracy) : Json(nullptr)},
              {"mean_psnr_db", decibels_to_json(row.mean_psnr)},
              {"mean_bitrate_mbps", row.mean_bitrate},
              {"bandwidth_reduction", row.reduction}};
}

}  // namespace

void HarnessConfig::validate() const {
  if (!(fps > 0.0)) throw Error(ErrorCode::InvalidArgument, "fps must be positive");
  if (corpus.frames < 1 || corpus.width < 8 || corpus.height < 8 || corpus.targets < 0) {
    throw Error(ErrorCode::InvalidArgument, "corpus needs frames >= 1, sides >= 8, targets >= 0");
  }
  if (codec != "builtin" && codec != "external") {
    throw Error(ErrorCode::InvalidArgument, "codec must be 'builtin' or 'external'");
  }
  if (codec == "external" && external.executable.empty()) {
    throw Error(ErrorCode::InvalidArgument, "external codec needs an executable");
  }
  for (EnvCondition c : kAllConditions) severities.at(c).validate();
  detector.validate();
  calibration.validate();
  controller.validate();
}

std::string HarnessConfig::hash() const {
  Json j = harness_config_to_json(*this);
  // Where outputs go and when they were made do not change the results.
  j.erase("output_dir");
  j.erase("timestamp");
  Fnv1a h;
  h.update(j.dump());
  return h.hex();
}

Json harness_config_to_json(const HarnessConfig& cfg) {
  Json severities = Json::object();
  for (EnvCondition c : kAllConditions) {
    Json s = cfg.severities.at(c);
    s.erase("seed");
    severities[std::string(to_string(c))] = s;
  }
  return Json{{"fps", cfg.fps},
              {"seed", cfg.seed},
              {"corpus",
               {{"frames", cfg.corpus.frames},
                {"width", cfg.corpus.width},
                {"height", cfg.corpus.height},
                {"targets", cfg.corpus.targets},
                {"style", cfg.corpus.style}}},
              {"codec", cfg.codec},
              {"external", cfg.external},
              {"severities", severities},
              {"detector", cfg.detector},
              {"calibration", cfg.calibration},
              {"controller", cfg.controller},
              {"features", cfg.features},
              {"output_dir", cfg.output_dir.string()},
              {"timestamp", cfg.timestamp}};
}

HarnessConfig harness_config_from_json(std::string_view text) {
  const Json j = parse_json(text, "config");
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  HarnessConfig cfg;
  try {
    if (!j.contains("seed")) {
      throw Error(ErrorCode::InvalidArgument, "config must set 'seed'");
    }
    maybe(j, "seed", cfg.seed);
    maybe(j, "fps", cfg.fps);
    if (const auto it = j.find("corpus"); it != j.end()) {
      maybe(*it, "frames", cfg.corpus.frames);
      maybe(*it, "width", cfg.corpus.width);
      maybe(*it, "height", cfg.corpus.height);
      maybe(*it, "targets", cfg.corpus.targets);
      maybe(*it, "style", cfg.corpus.style);
    }
    maybe(j, "codec", cfg.codec);
    maybe(j, "external", cfg.external);
    if (const auto it = j.find("severities"); it != j.end()) {
      for (const auto& [name, value] : it->items()) {
        const EnvCondition c = parse_condition(name);
        Severity s = cfg.severities.at(c);
        from_json(value, s);
        s.condition = c;
        s.validate();
        cfg.severities.at(c) = s;
      }
    }
    maybe(j, "detector", cfg.detector);
    maybe(j, "calibration", cfg.calibration);
    maybe(j, "controller", cfg.controller);
    maybe(j, "features", cfg.features);
    std::string out = cfg.output_dir.string();
    maybe(j, "output_dir", out);
    cfg.output_dir = out;
    maybe(j, "timestamp", cfg.timestamp);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
  }
  // One frame rate for the whole pipeline.
  cfg.controller.fps = cfg.fps;
  cfg.external.fps = cfg.fps;
  cfg.external.enabled = cfg.codec == "external";
  cfg.validate();
  return cfg;
}

HarnessConfig load_harness_config(const fs::path& path) {
  return harness_config_from_json(read_text_file(path));
}

std::unique_ptr<Encoder> make_codec(const HarnessConfig& cfg) {
  if (cfg.codec == "external") return std::make_unique<ExternalCodec>(cfg.external);
  return make_builtin_codec();
}

std::string provenance_timestamp(const HarnessConfig& cfg) {
  if (!cfg.timestamp.empty()) return cfg.timestamp;
  std::time_t t = 0;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (*end != '\0' || v < 0) {
      throw Error(ErrorCode::InvalidArgument, "SOURCE_DATE_EPOCH is not a non-negative integer");
    }
    t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string frame_name(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06zu", index);
  return buf;
}

AnnotatedSequence generate_corpus(const CorpusSpec& spec, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(spec.frames);
  AnnotatedSequence seq;
  seq.frames.resize(n);
  seq.ids.resize(n);
  seq.truths.resize(n);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) {
    seq.ids[i] = frame_name(i);
    Scene scene = synthesize_scene(mix_seed(seed, i), spec.targets, spec.width, spec.height,
                                   spec.style, seq.ids[i]);
    seq.frames[i] = std::move(scene.frame);
    seq.truths[i] = std::move(scene.annotations);
  }
  return seq;
}

void write_corpus(const fs::path& dir, const AnnotatedSequence& seq, const Json& manifest) {
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    save_raster(seq.frames[i], dir / "frames" / (seq.ids[i] + ".ppm"));
    if (seq.annotated()) {
      write_text_atomic(dir / "annotations" / (seq.ids[i] + ".xml"),
                        write_voc(seq.truths[i], seq.ids[i], seq.frames[i].width(),
                                  seq.frames[i].height()));
    }
  }
  write_text_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

AnnotatedSequence load_corpus(const fs::path& dir, const std::optional<fs::path>& annotations) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::IoError, "not a directory: " + dir.string());
  }
  const fs::path frame_dir = fs::is_directory(dir / "frames", ec) ? dir / "frames" : dir;
  fs::path ann_dir;
  if (annotations) {
    ann_dir = *annotations;
  } else if (fs::is_directory(dir / "annotations", ec)) {
    ann_dir = dir / "annotations";
  }

  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(frame_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ppm") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) {
    throw Error(ErrorCode::EmptySequence, "no .ppm frames in " + frame_dir.string());
  }

  AnnotatedSequence seq;
  for (const fs::path& p : paths) {
    seq.frames.push_back(load_raster(p));
    seq.ids.push_back(p.stem().string());
  }
  if (!ann_dir.empty()) {
    for (const std::string& id : seq.ids) {
      const fs::path xml = ann_dir / (id + ".xml");
      try {
        seq.truths.push_back(parse_voc(read_text_file(xml), id));
      } catch (const Error& e) {
        throw Error(e.code(), xml.string() + ": " + e.detail());
      }
    }
  }
  return seq;
}

Schedule parse_schedule(std::string_view json_text) {
  const Json j = parse_json(json_text, "schedule");
  const Json& list = j.is_object() && j.contains("segments") ? j.at("segments") : j;
  if (!list.is_array()) throw Error(ErrorCode::InvalidArgument, "schedule must be an array");
  Schedule schedule;
  try {
    for (const Json& s : list) {
      schedule.push_back({s.at("begin").get<std::size_t>(), s.at("end").get<std::size_t>(),
                          s.at("condition").get<EnvCondition>()});
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("schedule: ") + e.what());
  }
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i].begin >= schedule[i].end) {
      throw Error(ErrorCode::InvalidArgument, "schedule segment " + std::to_string(i) + " is empty");
    }
    if (i > 0 && schedule[i].begin < schedule[i - 1].end) {
      throw Error(ErrorCode::InvalidArgument,
                  "schedule segments must be ordered and disjoint (segment " +
                      std::to_string(i) + ")");
    }
  }
  return schedule;
}

std::string schedule_to_json(const Schedule& schedule) {
  Json list = Json::array();
  for (const ScheduleSegment& s : schedule) {
    list.push_back({{"begin", s.begin}, {"end", s.end}, {"condition", s.condition}});
  }
  return list.dump(2) + "\n";
}

std::vector<EnvCondition> schedule_labels(const Schedule& schedule, std::size_t frame_count) {
  std::vector<EnvCondition> labels(frame_count, EnvCondition::Normal);
  for (const ScheduleSegment& s : schedule) {
    for (std::size_t i = s.begin; i < std::min(s.end, frame_count); ++i) labels[i] = s.condition;
  }
  return labels;
}

std::vector<Frame> apply_schedule(std::span<const Frame> frames, const Schedule& schedule,
                                  const SeverityTable& severities, std::uint64_t seed) {
  const std::vector<EnvCondition> labels = schedule_labels(schedule, frames.size());
  std::vector<Frame> out(frames.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < frames.size(); ++i) {
    out[i] = synthesize(frames[i], severities.get(labels[i], mix_seed(seed, i)));
  }
  return out;
}

LabeledCorpus build_labeled_corpus(std::span<const Frame> clear, const SeverityTable& severities,
                                   std::uint64_t seed) {
  const std::size_t n = clear.size();
  LabeledCorpus corpus;
  corpus.frames.resize(n * kConditionCount);
  corpus.labels.resize(n * kConditionCount);
  const std::uint64_t base = mix_seed(seed, kClassifierStream);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < n * kConditionCount; ++k) {
    const EnvCondition c = kAllConditions[k / n];
    corpus.frames[k] = synthesize(clear[k % n], severities.get(c, mix_seed(base, k)));
    corpus.labels[k] = c;
  }
  return corpus;
}

ClassifierConfig calibrate_classifier(const LabeledCorpus& corpus, const FeatureParams& params) {
  std::vector<LabeledFrame> labeled;
  labeled.reserve(corpus.frames.size());
  for (std::size_t i = 0; i < corpus.frames.size(); ++i) {
    labeled.push_back({&corpus.frames[i], corpus.labels[i]});
  }
  return calibrate_thresholds(labeled, params);
}

double classifier_accuracy(const Classifier& classifier, const LabeledCorpus& corpus) {
  if (corpus.frames.empty()) throw Error(ErrorCode::EmptySequence, "no labelled frames");
  std::size_t correct = 0;
  const auto n = static_cast<std::ptrdiff_t>(corpus.frames.size());
#pragma omp parallel for reduction(+ : correct) schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (classifier.classify(corpus.frames[i]).argmax() == corpus.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(corpus.frames.size());
}

CalibrationOutputs run_calibration(const HarnessConfig& cfg, const AnnotatedSequence& corpus,
                                   const Encoder& codec) {
  if (!corpus.annotated()) {
    throw Error(ErrorCode::NoGroundTruth, "calibration needs an annotated corpus");
  }
  const CalibrationCorpus split =
      CalibrationCorpus::split(corpus.frames, corpus.truths, cfg.seed);
  PointEvaluator evaluator(split, codec, cfg.detector, cfg.severities);
  Provenance provenance{cfg.hash(), evaluator.corpus_hash(), provenance_timestamp(cfg)};

  CalibrationOutputs out;
  out.table = build_reference_table(cfg.calibration, evaluator, std::move(provenance));
  out.evaluations = evaluator.results();
  out.classifier = calibrate_classifier(
      build_labeled_corpus(corpus.frames, cfg.severities, cfg.seed), cfg.features);
  return out;
}

SummaryReport evaluate(std::span<const StepReport> reports, double fps,
                       std::span<const EnvCondition> labels) {
  if (reports.empty()) throw Error(ErrorCode::MalformedReport, "no step reports to evaluate");
  check_labels(reports, labels);
  std::map<EnvCondition, RowAccumulator> groups;
  RowAccumulator overall;
  SummaryReport summary;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    groups[group_of(reports, labels, i)].add(reports[i]);
    overall.add(reports[i]);
    if (reports[i].switched) ++summary.switches;
    if (reports[i].classifier_fault) ++summary.classifier_faults;
  }
  for (const auto& [c, acc] : groups) summary.per_condition[c] = acc.finish(fps);
  summary.overall = overall.finish(fps);
  return summary;
}

Json summary_to_json(const SummaryReport& summary) {
  Json per = Json::object();
  for (const auto& [c, row] : summary.per_condition) per[std::string(to_string(c))] = row_to_json(row);
  return Json{{"overall", row_to_json(summary.overall)},
              {"per_condition", per},
              {"switches", summary.switches},
              {"classifier_faults", summary.classifier_faults}};
}

std::string accuracy_by_crf_csv(std::span<const StepReport> reports,
                                std::span<const EnvCondition> labels) {
  check_labels(reports, labels);
  std::map<std::pair<EnvCondition, int>, RowAccumulator> groups;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    groups[{group_of(reports, labels, i), reports[i].crf}].add(reports[i]);
  }
  std::ostringstream out;
  out << "condition,crf,frames,accuracy,psnr\n";
  for (const auto& [key, acc] : groups) {
    const double psnr = acc.finite_psnr > 0
                            ? acc.psnr_sum / static_cast<double>(acc.finite_psnr)
                            : kInfinitePsnr;
    out << to_string(key.first) << ',' << key.second << ',' << acc.frames << ','
        << (acc.annotated > 0
                ? format_double(acc.accuracy_sum / static_cast<double>(acc.annotated), "%.6f")
                : std::string{})
        << ',' << format_double(psnr, "%.4f") << '\n';
  }
  return out.str();
}

std::string reports_to_jsonl(std::span<const StepReport> reports) {
  std::string out;
  for (const StepReport& r : reports) {
    out += step_report_to_json(r);
    out += '\n';
  }
  return out;
}

std::vector<StepReport> reports_from_jsonl(std::string_view text) {
  std::vector<StepReport> reports;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      reports.push_back(step_report_from_json(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedReport, "line " + std::to_string(line_no) + ": " + e.detail());
    }
  }
  if (reports.empty()) throw Error(ErrorCode::MalformedReport, "report stream is empty");
  return reports;
}

}  // namespace eblc
