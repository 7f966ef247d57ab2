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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "eblc/codec.hpp"
#include "eblc/detect.hpp"
#include "eblc/error.hpp"
#include "eblc/rng.hpp"

namespace eblc {
namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::filesystem::path(EBLC_FIXTURE_DIR) / "voc" / name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Detection det(BBox b, double score) { return Detection{b, score, std::string(kPersonLabel)}; }
Annotation truth(BBox b) { return Annotation{b, std::string(kPersonLabel), "f"}; }

BBox random_box(Rng& rng, double extent) {
  const double x = uniform(rng, 0.0, extent);
  const double y = uniform(rng, 0.0, extent);
  return {x, y, x + uniform(rng, 1.0, extent / 2), y + uniform(rng, 1.0, extent / 2)};
}

TEST(Iou, Examples) {
  const BBox b{0, 0, 10, 10};
  EXPECT_DOUBLE_EQ(iou(b, b), 1.0);
  EXPECT_DOUBLE_EQ(iou(b, {20, 20, 30, 30}), 0.0);
  EXPECT_DOUBLE_EQ(iou(b, {5, 0, 15, 10}), 50.0 / 150.0);
  EXPECT_DOUBLE_EQ(iou(b, {10, 0, 20, 10}), 0.0);  // touching edges share no area
}

TEST(Iou, Properties) {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const BBox a = random_box(rng, 40);
    const BBox b = random_box(rng, 40);
    const double o = iou(a, b);
    EXPECT_DOUBLE_EQ(o, iou(b, a));
    EXPECT_GE(o, 0.0);
    EXPECT_LE(o, 1.0);
    if (!(a == b)) EXPECT_LT(o, 1.0);
  }
}

TEST(Nms, Examples) {
  const std::vector<Detection> one{det({0, 0, 5, 5}, 0.4)};
  ASSERT_EQ(nms(one, 0.5).size(), 1u);
  EXPECT_EQ(nms(one, 0.5)[0].box, one[0].box);

  const std::vector<Detection> coincident{det({0, 0, 10, 10}, 0.8), det({0, 0, 10, 10}, 0.9)};
  const auto kept = nms(coincident, 0.5);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].score, 0.9);

  const std::vector<Detection> disjoint{det({0, 0, 5, 5}, 0.3), det({10, 10, 15, 15}, 0.7)};
  const auto both = nms(disjoint, 0.5);
  ASSERT_EQ(both.size(), 2u);
  EXPECT_EQ(both[0].score, 0.7);
  EXPECT_EQ(both[1].score, 0.3);
}

TEST(Nms, TiesKeepInputOrder) {
  const std::vector<Detection> tied{det({0, 0, 10, 10}, 0.5), det({1, 0, 11, 10}, 0.5)};
  const auto kept = nms(tied, 0.5);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].box, tied[0].box);
}

// 200 random detection sets, each checked against the four NMS invariants
// and the three match counting identities.
TEST(NmsMatch, RandomSets) {
  Rng rng(2026);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = uniform_int(rng, 0, 25);
    const double threshold = uniform(rng, 0.1, 0.9);
    std::vector<Detection> dets;
    for (int i = 0; i < n; ++i) {
      // Coarse scores make ties common.
      dets.push_back(det(random_box(rng, 60), uniform_int(rng, 0, 10) / 10.0));
    }
    const auto kept = nms(dets, threshold);

    for (const Detection& k : kept) {
      EXPECT_TRUE(std::any_of(dets.begin(), dets.end(), [&](const Detection& d) {
        return d.box == k.box && d.score == k.score;
      }));
    }
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (std::size_t j = i + 1; j < kept.size(); ++j) {
        EXPECT_LT(iou(kept[i].box, kept[j].box), threshold);
        EXPECT_GE(kept[i].score, kept[j].score);
      }
    }
    if (!dets.empty()) {
      const auto top = std::max_element(dets.begin(), dets.end(), [](auto& a, auto& b) {
        return a.score < b.score;  // first maximum wins ties
      });
      ASSERT_FALSE(kept.empty());
      EXPECT_EQ(kept[0].box, top->box);
      EXPECT_EQ(kept[0].score, top->score);
    }
    // Every discarded detection overlaps some survivor.
    for (const Detection& d : dets) {
      const bool survived = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
        return k.box == d.box && k.score == d.score;
      });
      if (survived) continue;
      EXPECT_TRUE(std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
        return k.score >= d.score && iou(k.box, d.box) >= threshold;
      }));
    }

    std::vector<Annotation> truths;
    const int t = uniform_int(rng, 0, 10);
    for (int i = 0; i < t; ++i) truths.push_back(truth(random_box(rng, 60)));
    const MatchResult m = match(dets, truths, uniform(rng, 0.1, 1.0));
    EXPECT_EQ(m.tp + m.fp, dets.size());
    EXPECT_EQ(m.tp + m.fn, truths.size());
    EXPECT_LE(m.tp, std::min(dets.size(), truths.size()));
    if (!truths.empty()) {
      const double a = detection_accuracy(m.tp, m.fp, m.fn);
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, 1.0);
    }
  }
}

TEST(Match, Examples) {
  const std::vector<Annotation> truths{truth({0, 0, 10, 10}), truth({20, 0, 30, 10})};
  std::vector<Detection> exact;
  for (const auto& t : truths) exact.push_back(det(t.box, 0.9));
  const MatchResult all = match(exact, truths);
  EXPECT_EQ(all.tp, 2u);
  EXPECT_EQ(all.fp, 0u);
  EXPECT_EQ(all.fn, 0u);

  const std::vector<Annotation> three{truth({0, 0, 1, 1}), truth({2, 2, 3, 3}),
                                      truth({4, 4, 5, 5})};
  const MatchResult none = match(std::vector<Detection>{}, three);
  EXPECT_EQ(none.tp, 0u);
  EXPECT_EQ(none.fp, 0u);
  EXPECT_EQ(none.fn, 3u);

  // Both detections overlap the single truth with iou 0.6; the higher score
  // takes it and the other becomes a false positive.
  const std::vector<Annotation> single{truth({0, 0, 10, 10})};
  const double shift = 2.5;  // (10-s)/(10+s) = 0.6
  const std::vector<Detection> two{det({shift, 0, 10 + shift, 10}, 0.7),
                                   det({-shift, 0, 10 - shift, 10}, 0.8)};
  ASSERT_NEAR(iou(two[0].box, single[0].box), 0.6, 1e-12);
  ASSERT_NEAR(iou(two[1].box, single[0].box), 0.6, 1e-12);
  const MatchResult m = match(two, single);
  EXPECT_EQ(m.tp, 1u);
  EXPECT_EQ(m.fp, 1u);
  EXPECT_EQ(m.fn, 0u);
}

TEST(Match, IgnoresOtherClasses) {
  const std::vector<Annotation> truths{truth({0, 0, 10, 10})};
  const std::vector<Detection> dets{Detection{{0, 0, 10, 10}, 0.9, "bicycle"}};
  const MatchResult m = match(dets, truths);
  EXPECT_EQ(m.tp, 0u);
  EXPECT_EQ(m.fp, 1u);
  EXPECT_EQ(m.fn, 1u);
}

TEST(Match, TiesGoToLowestTruthIndex) {
  const std::vector<Annotation> truths{truth({0, 0, 10, 10}), truth({0, 0, 10, 10})};
  const std::vector<Detection> dets{det({0, 0, 10, 10}, 0.9)};
  EXPECT_EQ(match(dets, truths).tp, 1u);
}

TEST(DetectionAccuracy, Examples) {
  EXPECT_DOUBLE_EQ(detection_accuracy(3, 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(detection_accuracy(0, 0, 5), 0.0);
  EXPECT_NEAR(detection_accuracy(2, 0, 1), 0.6667, 1e-4);
  EXPECT_DOUBLE_EQ(detection_accuracy(2, 40, 1), detection_accuracy(2, 0, 1));
  try {
    detection_accuracy(0, 4, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoGroundTruth);
  }
}

TEST(AccuracyStats, PrecisionAndF1) {
  const AccuracyStats s = accuracy_stats({3, 1, 1});
  EXPECT_DOUBLE_EQ(s.recall, 0.75);
  EXPECT_DOUBLE_EQ(s.precision, 0.75);
  EXPECT_DOUBLE_EQ(s.f1, 0.75);
}

TEST(Voc, OnePerson) {
  const auto a = parse_voc(read_fixture("one_person.xml"));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].class_label, "person");
  EXPECT_EQ(a[0].box, (BBox{10, 20, 50, 80}));
  EXPECT_EQ(a[0].frame_id, "000042.ppm");
}

TEST(Voc, EmptyAnnotation) { EXPECT_TRUE(parse_voc(read_fixture("empty.xml")).empty()); }

TEST(Voc, MissingBndbox) {
  try {
    parse_voc(read_fixture("missing_bndbox.xml"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingField);
    EXPECT_EQ(e.detail(), "object/bndbox");
  }
}

TEST(Voc, MalformedXml) {
  try {
    parse_voc("<annotation><object>");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedXml);
  }
  try {
    parse_voc("<other/>");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingField);
  }
  try {
    parse_voc(
        "<annotation><object><name>person</name><bndbox><xmin>a</xmin><ymin>0</ymin>"
        "<xmax>1</xmax><ymax>1</ymax></bndbox></object></annotation>");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedXml);
    EXPECT_NE(e.detail().find("object/bndbox/xmin"), std::string::npos);
  }
}

TEST(Voc, KeepsEveryClass) {
  const auto a = parse_voc(read_fixture("mixed_classes.xml"));
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[1].class_label, "bicycle");
}

TEST(Voc, WriteParseRoundTrip) {
  const Scene s = synthesize_scene(5, 6, 320, 240, {}, "000005.ppm");
  const auto back = parse_voc(write_voc(s.annotations, "000005.ppm", 320, 240));
  ASSERT_EQ(back.size(), s.annotations.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].box, s.annotations[i].box);
    EXPECT_EQ(back[i].frame_id, "000005.ppm");
  }
}

TEST(Scene, Examples) {
  const Scene empty = synthesize_scene(1, 0, 64, 48);
  EXPECT_TRUE(empty.annotations.empty());
  EXPECT_EQ(empty.frame.width(), 64);

  const Scene a = synthesize_scene(9, 8, 320, 240);
  const Scene b = synthesize_scene(9, 8, 320, 240);
  EXPECT_EQ(a.frame, b.frame);
  ASSERT_EQ(a.annotations.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(a.annotations[i].box, b.annotations[i].box);

  try {
    synthesize_scene(1, 500, 64, 48);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooManyTargets);
  }
}

TEST(Scene, BoxesAreDisjointAndInside) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scene s = synthesize_scene(seed, 8, 320, 240);
    for (std::size_t i = 0; i < s.annotations.size(); ++i) {
      const BBox& b = s.annotations[i].box;
      EXPECT_TRUE(b.valid());
      EXPECT_GE(b.x_min, 0);
      EXPECT_GE(b.y_min, 0);
      EXPECT_LE(b.x_max, 320);
      EXPECT_LE(b.y_max, 240);
      for (std::size_t j = i + 1; j < s.annotations.size(); ++j) {
        EXPECT_EQ(iou(b, s.annotations[j].box), 0.0);
      }
    }
  }
}

TEST(Scene, TargetsHaveTemplateContrast) {
  const SceneStyle style;
  const Scene s = synthesize_scene(4, 3, 320, 240, style);
  for (const Annotation& a : s.annotations) {
    const int x = static_cast<int>(a.box.x_min + a.box.x_max) / 2;
    const int y = static_cast<int>(a.box.y_min + a.box.y_max) / 2;
    const int inside = s.frame.at(x, y)[0];
    const int outside = s.frame.at(static_cast<int>(a.box.x_min) - 3, y)[0];
    EXPECT_NEAR(outside - inside, style.contrast, 2 * style.noise_amplitude + 4);
  }
}

TEST(DetectorConfig, Validation) {
  DetectorConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.input_size = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.nms_iou_threshold = 1.5;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.smoothing_radius = -1;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(ContrastDetector, BlankFrame) {
  EXPECT_TRUE(contrast_detector(Frame::filled(320, 240, 128), {}, 0.3).empty());
}

TEST(ContrastDetector, ScoresInUnitInterval) {
  const Scene s = synthesize_scene(12, 8, 320, 240);
  for (const Detection& d : contrast_detector(s.frame, {}, 0.2)) {
    EXPECT_GE(d.score, 0.0);
    EXPECT_LE(d.score, 1.0);
    EXPECT_TRUE(d.box.valid());
  }
}

// Scene generator plus detector: every target found on clear, uncompressed
// frames, both with a threshold fitted on other scenes and at a fixed one.
TEST(ContrastDetector, ClosedLoopIsPerfect) {
  const DetectorConfig cfg;
  std::vector<Frame> fit_frames;
  std::vector<std::vector<Annotation>> fit_truths;
  for (std::uint64_t seed = 100; seed < 104; ++seed) {
    Scene s = synthesize_scene(seed, 8, 320, 240);
    fit_frames.push_back(std::move(s.frame));
    fit_truths.push_back(std::move(s.annotations));
  }
  const double fitted = fit_contrast_threshold(fit_frames, fit_truths, cfg);

  for (double threshold : {fitted, 0.3}) {
    MatchResult total;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Scene s = synthesize_scene(seed, 8, 320, 240);
      total += match(contrast_detector(s.frame, cfg, threshold), s.annotations);
    }
    EXPECT_DOUBLE_EQ(accuracy_stats(total).recall, 1.0) << threshold;
  }
}

TEST(ContrastDetector, StrongCompressionNeverHelps) {
  const QuantRleCodec codec;
  const DetectorConfig cfg;
  MatchResult at0;
  MatchResult at51;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Scene s = synthesize_scene(seed, 8, 320, 240);
    const std::vector<Frame> clip{s.frame};
    const Frame lossless = codec.decode(codec.encode(clip, 0))[0];
    const Frame strong = codec.decode(codec.encode(clip, 51))[0];
    at0 += match(contrast_detector(lossless, cfg, 0.3), s.annotations);
    at51 += match(contrast_detector(strong, cfg, 0.3), s.annotations);
  }
  EXPECT_LE(accuracy_stats(at51).recall, accuracy_stats(at0).recall);
}

TEST(FitContrastThreshold, OnGrid) {
  const Scene s = synthesize_scene(3, 8, 320, 240);
  const std::vector<Frame> frames{s.frame};
  const std::vector<std::vector<Annotation>> truths{s.annotations};
  const double t = fit_contrast_threshold(frames, truths, {});
  const auto grid = contrast_threshold_grid();
  EXPECT_NE(std::find(grid.begin(), grid.end(), t), grid.end());
  EXPECT_THROW(fit_contrast_threshold(frames, {}, {}), Error);
}

}  // namespace
}  // namespace eblc
