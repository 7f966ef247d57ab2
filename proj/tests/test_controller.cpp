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

#include <map>
#include <string>
#include <vector>

#include "eblc/calibrate.hpp"
#include "eblc/classify.hpp"
#include "eblc/codec.hpp"
#include "eblc/controller.hpp"
#include "eblc/detect.hpp"
#include "eblc/error.hpp"
#include "eblc/metrics.hpp"

namespace eblc {
namespace {

constexpr std::uint8_t kFaultFrame = 255;

// Reads the condition off the first sample so a stream can script exactly
// what the classifier reports; kFaultFrame makes it throw.
class ScriptedClassifier final : public Classifier {
 public:
  ClassProbabilities classify(const Frame& frame) const override {
    const int v = frame.samples()[0];
    if (v == kFaultFrame) throw Error(ErrorCode::InvalidArgument, "scripted fault");
    return ClassProbabilities::one_hot(kAllConditions.at(static_cast<std::size_t>(v / 30)));
  }
};

Frame frame_for(EnvCondition c) {
  return Frame::filled(48, 32, static_cast<std::uint8_t>(30 * index_of(c) + 10));
}

const std::map<EnvCondition, int> kCrf{
    {EnvCondition::Normal, 30},    {EnvCondition::LightDark, 25},
    {EnvCondition::MediumDark, 20}, {EnvCondition::HighDark, 10},
    {EnvCondition::LightRain, 12},  {EnvCondition::ModerateRain, 4},
    {EnvCondition::HeavyRain, 2}};

ReferenceTable fake_table() {
  ReferenceTable t;
  for (EnvCondition c : kAllConditions) {
    const int crf = kCrf.at(c);
    t.entries.push_back({c, crf, 40.0, model_id(c, crf), 1.0});
    t.models.add({model_id(c, crf), c, crf, 0.3});
  }
  return t;
}

struct Stream {
  std::vector<Frame> frames;
  std::vector<std::string> ids;

  void add(const Frame& f, std::size_t count = 1) {
    for (std::size_t i = 0; i < count; ++i) {
      frames.push_back(f);
      ids.push_back(std::to_string(ids.size()));
    }
  }
};

class ControllerTest : public ::testing::Test {
 protected:
  ReferenceTable table_ = fake_table();
  ScriptedClassifier classifier_;
  QuantRleCodec codec_;

  std::vector<StepReport> run(const Stream& s, ControllerConfig cfg = {}) const {
    return Controller(table_, classifier_, codec_, cfg).run(s.frames, s.ids, {});
  }
};

TEST(ControllerConfig, Validation) {
  ControllerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.classify_every = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.fps = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(BandwidthReduction, Examples) {
  EXPECT_NEAR(bandwidth_reduction(9.82, 0.53), 18.5, 0.05);
  EXPECT_DOUBLE_EQ(bandwidth_reduction(9.82, 9.82), 1.0);
  EXPECT_NEAR(bandwidth_reduction(9.82, 1.01), 9.72, 0.005);
  try {
    bandwidth_reduction(10.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroCompressedSize);
  }
}

TEST(RawFrameBits, TwentyFourBitsPerPixel) {
  EXPECT_EQ(raw_frame_bits(Frame(320, 240)), 320u * 240u * 24u);
}

TEST_F(ControllerTest, IncompleteTableRejected) {
  table_.entries.pop_back();
  EXPECT_THROW(Controller(table_, classifier_, codec_), Error);
}

TEST_F(ControllerTest, MissingModelRejected) {
  table_.models = {};
  try {
    Controller(table_, classifier_, codec_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingModel);
  }
}

TEST_F(ControllerTest, NormalStreamUsesTableCrf) {
  Stream s;
  s.add(frame_for(EnvCondition::Normal), 60);
  for (const StepReport& r : run(s)) {
    EXPECT_EQ(r.crf, 30);
    EXPECT_EQ(r.condition, EnvCondition::Normal);
    EXPECT_EQ(r.model_id, model_id(EnvCondition::Normal, 30));
    EXPECT_FALSE(r.switched);
    EXPECT_GT(r.bandwidth_reduction, 0.0);
  }
}

TEST_F(ControllerTest, ClassificationCadence) {
  Stream s;
  s.add(frame_for(EnvCondition::Normal), 45);
  const auto reports = run(s);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    EXPECT_EQ(reports[i].classified, i % 10 == 0) << i;
  }
}

TEST_F(ControllerTest, BootstrapPicksFirstCondition) {
  Stream s;
  s.add(frame_for(EnvCondition::HighDark), 5);
  for (const StepReport& r : run(s)) EXPECT_EQ(r.crf, kCrf.at(EnvCondition::HighDark));
}

TEST_F(ControllerTest, TransitionWithinNTimesM) {
  const ControllerConfig cfg;
  const std::size_t bound = static_cast<std::size_t>(cfg.classify_every * cfg.vote_window);
  for (std::size_t k : {37u, 40u, 41u, 49u, 50u}) {
    Stream s;
    s.add(frame_for(EnvCondition::Normal), k);
    s.add(frame_for(EnvCondition::HeavyRain), 100 - k);
    const auto reports = run(s, cfg);
    std::size_t first = reports.size();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (reports[i].crf == kCrf.at(EnvCondition::HeavyRain)) {
        first = std::min(first, i);
      } else {
        EXPECT_EQ(reports[i].crf, 30);
      }
      // Once switched the controller stays on the new condition.
      if (first < i) EXPECT_EQ(reports[i].crf, kCrf.at(EnvCondition::HeavyRain));
    }
    ASSERT_LT(first, reports.size()) << k;
    EXPECT_GT(first, k);
    EXPECT_LE(first, k + bound) << k;
    EXPECT_TRUE(reports[first - 1].switched);
  }
}

TEST_F(ControllerTest, SingleGlitchNeverSwitches) {
  Stream s;
  s.add(frame_for(EnvCondition::Normal), 20);
  s.add(frame_for(EnvCondition::HeavyRain));  // frame 20 is a classification frame
  s.add(frame_for(EnvCondition::Normal), 39);
  const auto reports = run(s);
  ASSERT_TRUE(reports[20].classified);
  for (const StepReport& r : reports) {
    EXPECT_EQ(r.condition, EnvCondition::Normal);
    EXPECT_FALSE(r.switched);
  }
}

TEST_F(ControllerTest, AlternatingVotesNeverSwitch) {
  // Two different non-active votes in a window of three are not a majority.
  Stream s;
  s.add(frame_for(EnvCondition::Normal), 10);
  s.add(frame_for(EnvCondition::HeavyRain), 10);
  s.add(frame_for(EnvCondition::LightRain), 10);
  s.add(frame_for(EnvCondition::Normal), 10);
  for (const StepReport& r : run(s)) EXPECT_EQ(r.condition, EnvCondition::Normal);
}

TEST_F(ControllerTest, ClassifierFaultKeepsCondition) {
  Stream s;
  s.add(frame_for(EnvCondition::MediumDark), 10);
  s.add(Frame::filled(48, 32, kFaultFrame), 30);
  const auto reports = run(s);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    EXPECT_EQ(reports[i].condition, EnvCondition::MediumDark);
    EXPECT_EQ(reports[i].crf, kCrf.at(EnvCondition::MediumDark));
    EXPECT_EQ(reports[i].classifier_fault, i >= 10 && i % 10 == 0) << i;
  }
}

TEST_F(ControllerTest, FaultOnBootstrapStartsNormal) {
  Stream s;
  s.add(Frame::filled(48, 32, kFaultFrame), 3);
  for (const StepReport& r : run(s)) EXPECT_EQ(r.condition, EnvCondition::Normal);
}

TEST_F(ControllerTest, SelectedCrfAlwaysFromTable) {
  Stream s;
  const EnvCondition order[] = {EnvCondition::Normal, EnvCondition::LightDark,
                                EnvCondition::HeavyRain, EnvCondition::MediumDark,
                                EnvCondition::Normal};
  for (EnvCondition c : order) s.add(frame_for(c), 40);
  const auto reports = run(s);
  int switches = 0;
  for (const StepReport& r : reports) {
    EXPECT_EQ(r.crf, kCrf.at(r.condition));
    EXPECT_EQ(r.model_id, model_id(r.condition, r.crf));
    switches += r.switched;
  }
  EXPECT_EQ(switches, 4);
}

TEST_F(ControllerTest, Deterministic) {
  Stream s;
  s.add(frame_for(EnvCondition::Normal), 15);
  s.add(frame_for(EnvCondition::HighDark), 30);
  const auto a = run(s);
  const auto b = run(s);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].crf, b[i].crf);
    EXPECT_EQ(a[i].compressed_bits, b[i].compressed_bits);
    EXPECT_EQ(a[i].psnr, b[i].psnr);
  }
}

TEST_F(ControllerTest, StreamShapeErrors) {
  const Controller c(table_, classifier_, codec_);
  const std::vector<Frame> none;
  const std::vector<std::string> no_ids;
  try {
    c.run(none, no_ids, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySequence);
  }
  const std::vector<Frame> two(2, frame_for(EnvCondition::Normal));
  const std::vector<std::string> one_id{"a"};
  EXPECT_THROW(c.run(two, one_id, {}), Error);
}

TEST(StaticBaseline, LosslessIsExact) {
  const QuantRleCodec codec;
  std::vector<Frame> frames;
  std::vector<std::string> ids;
  std::vector<std::vector<Annotation>> truths;
  for (std::uint64_t i = 0; i < 5; ++i) {
    Scene s = synthesize_scene(i, 8, 320, 240);
    frames.push_back(std::move(s.frame));
    truths.push_back(std::move(s.annotations));
    ids.push_back(std::to_string(i));
  }
  const DetectorModel model{model_id(EnvCondition::Normal, 0), EnvCondition::Normal, 0, 0.3};
  const auto reports = run_static_baseline(frames, ids, truths, 0, model, {}, codec);
  ASSERT_EQ(reports.size(), 5u);
  for (const StepReport& r : reports) {
    EXPECT_TRUE(is_infinite_psnr(r.psnr));
    EXPECT_EQ(r.crf, 0);
    ASSERT_TRUE(r.accuracy.has_value());
    EXPECT_EQ(*r.accuracy, 1.0);
    // Lossless coding of a textured frame is close to raw size.
    EXPECT_GT(r.bandwidth_reduction, 0.5);
    EXPECT_LT(r.bandwidth_reduction, 2.0);
  }
  EXPECT_THROW(run_static_baseline(frames, ids, truths, 52, model, {}, codec), Error);
}

}  // namespace
}  // namespace eblc
