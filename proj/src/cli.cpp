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

#include "eblc/cli.hpp"

#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "eblc/error.hpp"
#include "eblc/harness.hpp"
#include "eblc/io.hpp"
#include "eblc/metrics.hpp"

namespace eblc {
namespace fs = std::filesystem;
namespace {

// Raised for missing or contradictory flags detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--config", common.config, "JSON harness configuration");
  cmd->add_option("--seed", common.seed, "64-bit seed (overrides the config)");
  cmd->add_option("--out", common.out, "output directory (overrides the config)");
}

HarnessConfig resolve_config(const CommonOptions& common, bool needs_seed) {
  HarnessConfig cfg;
  if (!common.config.empty()) {
    cfg = load_harness_config(common.config);
  } else if (needs_seed && !common.seed) {
    throw UsageError("--seed is required when no --config is given");
  }
  if (common.seed) cfg.seed = *common.seed;
  if (!common.out.empty()) cfg.output_dir = common.out;
  return cfg;
}

Json provenance_json(const HarnessConfig& cfg) {
  return Json{{"seed", cfg.seed},
              {"config_hash", cfg.hash()},
              {"timestamp", provenance_timestamp(cfg)}};
}

// A single raster or a directory of them.
AnnotatedSequence load_frames(const fs::path& path) {
  if (fs::is_directory(path)) return load_corpus(path);
  AnnotatedSequence seq;
  seq.frames.push_back(load_raster(path));
  seq.ids.push_back(path.stem().string());
  return seq;
}

ReferenceTable load_table(const fs::path& path) {
  return reference_table_from_json(read_text_file(path));
}

AnnotatedSequence load_run_input(const std::string& input, const std::string& annotations) {
  AnnotatedSequence seq =
      annotations.empty() ? load_corpus(input) : load_corpus(input, fs::path(annotations));
  return seq;
}

// The calibrated Normal model closest to `crf`, ties to the lower CRF.
DetectorModel nearest_normal_model(const ReferenceTable& table, int crf) {
  std::optional<DetectorModel> best;
  for (const DetectorModel& m : table.models.models()) {
    if (m.condition != EnvCondition::Normal) continue;
    if (!best || std::abs(m.crf - crf) < std::abs(best->crf - crf)) best = m;
  }
  if (!best) throw Error(ErrorCode::MissingModel, "table has no normal-condition model");
  return *best;
}

void print_summary(std::ostream& out, const SummaryReport& s) {
  char line[160];
  out << "condition        frames  accuracy  psnr_db  mbit/s  reduction\n";
  auto row = [&](std::string_view name, const SummaryRow& r) {
    std::snprintf(line, sizeof line, "%-15s %7zu  %8s  %7.2f  %6.3f  %9.2f\n",
                  std::string(name).c_str(), r.frames,
                  r.mean_accuracy ? std::to_string(*r.mean_accuracy).substr(0, 6).c_str() : "-",
                  r.mean_psnr, r.mean_bitrate, r.reduction);
    out << line;
  };
  for (const auto& [c, r] : s.per_condition) row(to_string(c), r);
  row("overall", s.overall);
}

void write_summary(const fs::path& dir, const SummaryReport& s, std::span<const StepReport> reports,
                   std::span<const EnvCondition> labels, const HarnessConfig& cfg) {
  Json j = summary_to_json(s);
  j["provenance"] = provenance_json(cfg);
  write_text_atomic(dir / "summary.json", j.dump(2) + "\n");
  write_text_atomic(dir / "accuracy_vs_crf.csv", accuracy_by_crf_csv(reports, labels));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Error-bounded adaptive compression harness", "eblc"};
  app.require_subcommand(1);

  // Each subcommand sets `stage`, `input` and `action`; the action runs after
  // parsing so that every failure is reported the same way.
  std::string stage;
  std::string input;
  std::function<void()> action;

  CommonOptions common;

  // gen-corpus
  std::optional<int> gen_frames, gen_width, gen_height, gen_targets;
  CLI::App* gen = app.add_subcommand("gen-corpus", "synthesize an annotated clear-weather corpus");
  add_common(gen, common);
  gen->add_option("--frames", gen_frames, "number of frames");
  gen->add_option("--width", gen_width, "frame width");
  gen->add_option("--height", gen_height, "frame height");
  gen->add_option("--targets", gen_targets, "pedestrians per frame");
  gen->callback([&] {
    stage = "gen-corpus";
    action = [&] {
      HarnessConfig cfg = resolve_config(common, true);
      if (gen_frames) cfg.corpus.frames = *gen_frames;
      if (gen_width) cfg.corpus.width = *gen_width;
      if (gen_height) cfg.corpus.height = *gen_height;
      if (gen_targets) cfg.corpus.targets = *gen_targets;
      cfg.validate();
      input = "seed " + std::to_string(cfg.seed);
      const AnnotatedSequence seq = generate_corpus(cfg.corpus, cfg.seed);
      Json manifest = provenance_json(cfg);
      manifest["frames"] = cfg.corpus.frames;
      manifest["width"] = cfg.corpus.width;
      manifest["height"] = cfg.corpus.height;
      manifest["targets"] = cfg.corpus.targets;
      manifest["style"] = cfg.corpus.style;
      write_corpus(cfg.output_dir, seq, manifest);
      out << "wrote " << seq.frames.size() << " frames to " << cfg.output_dir.string() << '\n';
    };
  });

  // augment
  std::string aug_input, aug_condition;
  std::optional<double> aug_factor, aug_density, aug_length;
  std::optional<int> aug_blur;
  CLI::App* aug = app.add_subcommand("augment", "apply a weather condition to a frame directory");
  add_common(aug, common);
  aug->add_option("--input", aug_input, "input corpus or frame directory")->required();
  aug->add_option("--condition", aug_condition, "condition name, e.g. heavy-rain")->required();
  aug->add_option("--darkness-factor", aug_factor, "lightness multiplier");
  aug->add_option("--streak-density", aug_density, "streaks per megapixel");
  aug->add_option("--streak-length", aug_length, "streak length in pixels");
  aug->add_option("--blur-radius", aug_blur, "box blur radius");
  aug->callback([&] {
    stage = "augment";
    input = aug_input;
    action = [&] {
      HarnessConfig cfg = resolve_config(common, true);
      const EnvCondition c = parse_condition(aug_condition);
      Severity& s = cfg.severities.at(c);
      if (aug_factor) s.darkness_factor = *aug_factor;
      if (aug_density) s.streak_density = *aug_density;
      if (aug_length) s.streak_length = *aug_length;
      if (aug_blur) s.blur_radius = *aug_blur;
      s.validate();
      AnnotatedSequence seq = load_corpus(aug_input);
      const Schedule all{{0, seq.frames.size(), c}};
      seq.frames = apply_schedule(seq.frames, all, cfg.severities, cfg.seed);
      Json severity = s;
      severity.erase("seed");
      Json manifest = provenance_json(cfg);
      manifest["input"] = aug_input;
      manifest["condition"] = c;
      manifest["severity"] = severity;
      manifest["frames"] = seq.frames.size();
      write_corpus(cfg.output_dir, seq, manifest);
      out << "wrote " << seq.frames.size() << ' ' << to_string(c) << " frames to "
          << cfg.output_dir.string() << '\n';
    };
  });

  // calibrate
  std::string cal_corpus;
  CLI::App* cal = app.add_subcommand("calibrate", "build the reference table and classifier");
  add_common(cal, common);
  cal->add_option("--corpus", cal_corpus, "annotated clear-weather corpus directory")->required();
  cal->callback([&] {
    stage = "calibrate";
    input = cal_corpus;
    action = [&] {
      const HarnessConfig cfg = resolve_config(common, true);
      const AnnotatedSequence corpus = load_corpus(cal_corpus);
      const auto codec = make_codec(cfg);
      const CalibrationOutputs result = run_calibration(cfg, corpus, *codec);
      write_text_atomic(cfg.output_dir / "reference_table.json",
                        reference_table_to_json(result.table));
      write_text_atomic(cfg.output_dir / "eval_log.csv", evaluation_log_csv(result.evaluations));
      write_text_atomic(cfg.output_dir / "classifier.json",
                        classifier_config_to_json(result.classifier));
      for (const ReferenceTableEntry& e : result.table.entries) {
        char line[128];
        std::snprintf(line, sizeof line, "%-15s max_crf %-4s psnr %7.2f  accuracy %.4f\n",
                      std::string(to_string(e.condition)).c_str(),
                      e.max_crf ? std::to_string(*e.max_crf).c_str() : "none", e.min_psnr,
                      e.accuracy_at_max);
        out << line;
      }
    };
  });

  // classify
  std::string cls_config, cls_input;
  CLI::App* cls = app.add_subcommand("classify", "print condition weights per frame");
  cls->add_option("--classifier", cls_config, "classifier.json from calibrate")->required();
  cls->add_option("--input", cls_input, "raster or frame directory")->required();
  cls->callback([&] {
    stage = "classify";
    input = cls_input;
    action = [&] {
      const ThresholdClassifier classifier(classifier_config_from_json(read_text_file(cls_config)));
      const AnnotatedSequence seq = load_frames(cls_input);
      for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        const ClassProbabilities p = classifier.classify(seq.frames[i]);
        out << Json{{"frame_id", seq.ids[i]},
                    {"weights", p.weights()},
                    {"argmax", p.argmax()}}
                   .dump()
            << '\n';
      }
    };
  });

  // metrics
  std::string met_ref, met_test;
  CLI::App* met = app.add_subcommand("metrics", "quality of a test sequence against a reference");
  met->add_option("--reference", met_ref, "reference raster or directory")->required();
  met->add_option("--test", met_test, "degraded raster or directory")->required();
  met->callback([&] {
    stage = "metrics";
    input = met_ref + " vs " + met_test;
    action = [&] {
      const AnnotatedSequence a = load_frames(met_ref);
      const AnnotatedSequence b = load_frames(met_test);
      const QualityReport q = segment_quality(a.frames, b.frames);
      out << Json{{"psnr_db", decibels_to_json(q.psnr)},
                  {"rmse", q.rmse},
                  {"ssim", q.ssim},
                  {"frames", q.frame_count}}
                 .dump()
          << '\n';
    };
  });

  // run
  std::string run_input, run_table, run_classifier, run_annotations, run_schedule;
  std::optional<int> run_static;
  CLI::App* run = app.add_subcommand("run", "drive the adaptive controller over a stream");
  add_common(run, common);
  run->add_option("--input", run_input, "corpus or frame directory")->required();
  run->add_option("--table", run_table, "reference_table.json")->required();
  run->add_option("--classifier", run_classifier, "classifier.json (adaptive mode)");
  run->add_option("--annotations", run_annotations, "VOC directory (default: <input>/annotations)");
  run->add_option("--schedule", run_schedule, "weather schedule applied to the input frames");
  run->add_option("--static-crf", run_static, "disable adaptation and code at this CRF");
  run->callback([&] {
    stage = "run";
    input = run_input;
    action = [&] {
      if (!run_static && run_classifier.empty()) {
        throw UsageError("run needs --classifier unless --static-crf is given");
      }
      const HarnessConfig cfg = resolve_config(common, !run_schedule.empty());
      AnnotatedSequence seq = load_run_input(run_input, run_annotations);
      std::vector<EnvCondition> labels;
      if (!run_schedule.empty()) {
        const Schedule schedule = parse_schedule(read_text_file(run_schedule));
        seq.frames = apply_schedule(seq.frames, schedule, cfg.severities, cfg.seed);
        labels = schedule_labels(schedule, seq.frames.size());
      }
      const ReferenceTable table = load_table(run_table);
      const auto codec = make_codec(cfg);
      std::vector<StepReport> reports;
      if (run_static) {
        reports = run_static_baseline(seq.frames, seq.ids, seq.truths, *run_static,
                                      nearest_normal_model(table, *run_static), table.detector,
                                      *codec);
      } else {
        const ThresholdClassifier classifier(
            classifier_config_from_json(read_text_file(run_classifier)));
        const Controller controller(table, classifier, *codec, cfg.controller);
        reports = controller.run(seq.frames, seq.ids, seq.truths);
      }
      write_text_atomic(cfg.output_dir / "reports.jsonl", reports_to_jsonl(reports));
      const SummaryReport summary = evaluate(reports, cfg.fps, labels);
      write_summary(cfg.output_dir, summary, reports, labels, cfg);
      print_summary(out, summary);
    };
  });

  // evaluate
  std::string ev_reports, ev_schedule;
  CLI::App* ev = app.add_subcommand("evaluate", "summarize a JSON-lines report stream");
  add_common(ev, common);
  ev->add_option("--reports", ev_reports, "reports.jsonl from run")->required();
  ev->add_option("--schedule", ev_schedule, "group frames by scheduled condition");
  ev->callback([&] {
    stage = "evaluate";
    input = ev_reports;
    action = [&] {
      const HarnessConfig cfg = resolve_config(common, false);
      const std::vector<StepReport> reports = reports_from_jsonl(read_text_file(ev_reports));
      std::vector<EnvCondition> labels;
      if (!ev_schedule.empty()) {
        labels = schedule_labels(parse_schedule(read_text_file(ev_schedule)), reports.size());
      }
      const SummaryReport summary = evaluate(reports, cfg.fps, labels);
      write_summary(cfg.output_dir, summary, reports, labels, cfg);
      print_summary(out, summary);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return 0;
    err << app.help();
    return 2;
  }

  try {
    action();
    return 0;
  } catch (const UsageError& e) {
    err << "eblc " << stage << ": " << e.what() << '\n' << app.get_subcommand(stage)->help();
    return 2;
  } catch (const Error& e) {
    err << "eblc " << stage << ": " << input << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "eblc " << stage << ": " << input << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace eblc
