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
#include <cstdlib>
#include <numeric>
#include <vector>

#include "eblc/augment.hpp"
#include "eblc/detect.hpp"
#include "eblc/error.hpp"
#include "eblc/metrics.hpp"
#include "eblc/rng.hpp"
#include "test_util.hpp"

namespace eblc {
namespace {

int max_abs_diff(const Frame& a, const Frame& b) {
  int worst = 0;
  for (std::size_t i = 0; i < a.sample_count(); ++i) {
    worst = std::max(worst, std::abs(a.samples()[i] - b.samples()[i]));
  }
  return worst;
}

double mean_sample(const Frame& f) {
  const auto s = f.samples();
  return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

double mean_lightness(const Frame& f) {
  double sum = 0.0;
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      const auto* p = f.at(x, y);
      sum += rgb_to_hsl(p[0], p[1], p[2]).lightness;
    }
  }
  return sum / static_cast<double>(f.pixel_count());
}

Frame scene(std::uint64_t seed) { return synthesize_scene(seed, 4, 160, 120).frame; }

TEST(Severity, Invariants) {
  Severity s;
  EXPECT_NO_THROW(s.validate());
  s.darkness_factor = 0.5;
  EXPECT_THROW(s.validate(), Error);  // Normal must be the identity

  Severity dark{EnvCondition::MediumDark, 0.5, 10.0};
  EXPECT_THROW(dark.validate(), Error);
  Severity rain{EnvCondition::LightRain, 0.9, 50.0};
  EXPECT_THROW(rain.validate(), Error);
}

TEST(SeverityTable, Defaults) {
  const SeverityTable t;
  EXPECT_EQ(t.at(EnvCondition::LightDark).darkness_factor, 0.7);
  EXPECT_EQ(t.at(EnvCondition::MediumDark).darkness_factor, 0.5);
  EXPECT_EQ(t.at(EnvCondition::HighDark).darkness_factor, 0.3);
  EXPECT_EQ(t.at(EnvCondition::LightRain).streak_density, 50.0);
  EXPECT_EQ(t.at(EnvCondition::ModerateRain).streak_density, 150.0);
  EXPECT_EQ(t.at(EnvCondition::HeavyRain).streak_density, 300.0);
  EXPECT_EQ(t.at(EnvCondition::HeavyRain).streak_length, 12.0);
  EXPECT_EQ(t.at(EnvCondition::LightRain).blur_radius, 1);
  EXPECT_EQ(t.at(EnvCondition::ModerateRain).blur_radius, 2);
  EXPECT_EQ(t.at(EnvCondition::HeavyRain).blur_radius, 3);
  for (EnvCondition c : kAllConditions) {
    EXPECT_EQ(t.at(c).condition, c);
    EXPECT_NO_THROW(t.at(c).validate());
  }
  EXPECT_EQ(t.get(EnvCondition::HeavyRain, 99).seed, 99u);
}

TEST(Darken, Examples) {
  const Frame f = scene(1);
  EXPECT_LE(max_abs_diff(darken(f, 1.0), f), 1);

  const Frame black = Frame::filled(8, 8, 0);
  EXPECT_EQ(darken(black, 0.3), black);

  const Frame half = darken(Frame::filled(8, 8, 200), 0.5);
  for (auto v : half.samples()) EXPECT_NEAR(v, 100, 1);
}

TEST(Darken, RejectsBadFactors) {
  const Frame f(4, 4);
  for (double factor : {0.0, -0.2, 1.01}) {
    try {
      darken(f, factor);
      FAIL() << factor;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidFactor);
    }
  }
}

TEST(Darken, MonotoneInFactor) {
  const Frame f = scene(2);
  double previous = mean_lightness(f) + 1e-12;
  for (double factor : {1.0, 0.9, 0.7, 0.5, 0.3, 0.1}) {
    const double now = mean_lightness(darken(f, factor));
    EXPECT_LE(now, previous) << factor;
    previous = now;
  }
}

TEST(AddRain, NoOpParameters) {
  const Frame f = scene(3);
  EXPECT_EQ(add_rain(f, 0.0, 12.0, 0, 5), f);
}

TEST(AddRain, Deterministic) {
  const Frame f = scene(4);
  EXPECT_EQ(add_rain(f, 300.0, 12.0, 2, 77), add_rain(f, 300.0, 12.0, 2, 77));
  EXPECT_NE(add_rain(f, 300.0, 12.0, 0, 77), add_rain(f, 300.0, 12.0, 0, 78));
}

TEST(AddRain, StreaksAreBright) {
  // On a black frame every touched pixel moves toward the streak colour.
  const Frame black = Frame::filled(200, 150, 0);
  const Frame rain = add_rain(black, 300.0, 12.0, 0, 1);
  EXPECT_GT(mean_sample(rain), 0.0);
  for (auto v : rain.samples()) EXPECT_LE(v, 200);
}

TEST(AddRain, HeavierRainLowersPsnr) {
  const SeverityTable t;
  const Frame f = scene(5);
  const Frame light = synthesize(f, t.get(EnvCondition::LightRain, 9));
  const Frame heavy = synthesize(f, t.get(EnvCondition::HeavyRain, 9));
  EXPECT_LT(psnr(f, heavy), psnr(f, light));
}

// For a fixed seed the streaks of a lower density are a prefix of those of a
// higher one, so more streaks can only move pixels further from the original.
TEST(AddRain, DensityNeverRaisesPsnr) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Frame f = scene(10 + seed);
    double previous = kInfinitePsnr;
    for (double density : {0.0, 25.0, 50.0, 100.0, 150.0, 300.0, 600.0}) {
      const double now = psnr(f, add_rain(f, density, 12.0, 0, seed));
      EXPECT_LE(now, previous) << density;
      previous = now;
    }
  }
}

TEST(Synthesize, NormalIsIdentity) {
  const Frame f = scene(6);
  EXPECT_LE(max_abs_diff(synthesize(f, SeverityTable().get(EnvCondition::Normal, 1)), f), 1);
}

TEST(Synthesize, HighDarkOnGray) {
  const Frame out =
      synthesize(Frame::filled(32, 32, 200), SeverityTable().get(EnvCondition::HighDark, 1));
  EXPECT_NEAR(mean_sample(out), 60.0, 2.0);
}

TEST(Synthesize, SequenceCounts) {
  // Seven conditions over a 427-frame corpus give 2,989 frames.
  const std::vector<Frame> clear(427, Frame::filled(8, 8, 128));
  const SeverityTable t;
  std::size_t total = 0;
  for (EnvCondition c : kAllConditions) total += synthesize_sequence(clear, t.get(c, 3)).size();
  EXPECT_EQ(total, 2989u);
}

TEST(Synthesize, PureFunctionOfFrameAndSeverity) {
  const Frame f = scene(7);
  const SeverityTable t;
  for (EnvCondition c : kAllConditions) {
    EXPECT_EQ(synthesize(f, t.get(c, 42)), synthesize(f, t.get(c, 42)));
  }
  const std::vector<Frame> seq{f, f};
  const auto out = synthesize_sequence(seq, t.get(EnvCondition::HeavyRain, 42));
  EXPECT_NE(out[0], out[1]);  // per-frame seeds differ
}

}  // namespace
}  // namespace eblc
