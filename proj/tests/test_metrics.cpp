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

#include <cmath>
#include <vector>

#include "eblc/error.hpp"
#include "eblc/metrics.hpp"
#include "test_util.hpp"

namespace eblc {
namespace {

// A 100x100 frame has 30000 samples; `count` of them are moved by 255, so
// MSE = count * 65025 / 30000.
Frame with_spikes(const Frame& base, int count) {
  Frame f = base;
  for (int i = 0; i < count; ++i) f.samples()[i * 7] = f.samples()[i * 7] == 0 ? 255 : 0;
  return f;
}

TEST(Mse, Examples) {
  const Frame zero = Frame::filled(4, 4, 0);
  EXPECT_EQ(mse(zero, zero), 0.0);
  EXPECT_EQ(mse(zero, Frame::filled(4, 4, 1)), 1.0);

  Frame a = Frame::filled(2, 1, 50);
  Frame b = a;
  b.samples()[4] = 60;
  EXPECT_NEAR(mse(a, b), 100.0 / 6.0, 1e-12);
  EXPECT_NEAR(rmse(a, b), std::sqrt(100.0 / 6.0), 1e-12);
  EXPECT_NEAR(rmse(a, b), 4.0825, 1e-4);
}

TEST(Mse, DimensionMismatch) {
  try {
    mse(Frame(2, 2), Frame(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Psnr, Examples) {
  const Frame black = Frame::filled(16, 16, 0);
  const Frame white = Frame::filled(16, 16, 255);
  EXPECT_TRUE(is_infinite_psnr(psnr(black, black)));
  EXPECT_EQ(psnr(black, white), 0.0);
  EXPECT_EQ(rmse(black, white), 255.0);
  // 10 log10(65025 / 6.5025) = 10 log10(10^4).
  EXPECT_NEAR(psnr_from_mse(6.5025), 40.0, 1e-9);
  const Frame base = Frame::filled(100, 100, 0);
  const Frame spiked = with_spikes(base, 3);
  EXPECT_NEAR(mse(base, spiked), 6.5025, 1e-12);
  EXPECT_NEAR(psnr(base, spiked), 40.0, 0.01);
}

TEST(Psnr, StrictlyDecreasingInMse) {
  double previous = psnr_from_mse(1e-3);
  for (double m = 0.01; m < 70000; m *= 1.7) {
    const double now = psnr_from_mse(m);
    EXPECT_LT(now, previous) << m;
    previous = now;
  }
}

TEST(Ssim, Examples) {
  const Frame a = test::random_frame(1, 32, 24);
  EXPECT_EQ(ssim(a, a), 1.0);
  EXPECT_EQ(ssim(Frame::filled(20, 20, 100), Frame::filled(20, 20, 100)), 1.0);
  const double c1 = (0.01 * 255) * (0.01 * 255);
  const double expected = c1 / (255.0 * 255.0 + c1);
  EXPECT_NEAR(ssim(Frame::filled(20, 20, 0), Frame::filled(20, 20, 255)), expected, 1e-9);
  EXPECT_NEAR(expected, 0.0001, 0.00001);
}

TEST(Ssim, Errors) {
  try {
    ssim(Frame(10, 40), Frame(10, 40));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FrameTooSmall);
  }
  try {
    ssim(Frame(20, 20), Frame(21, 20));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(MetricProperties, SymmetryOverRandomPairs) {
  Rng rng(2026);
  for (int i = 0; i < 50; ++i) {
    const int w = uniform_int(rng, 11, 40);
    const int h = uniform_int(rng, 11, 40);
    const Frame a = test::random_frame(rng, w, h);
    const Frame b = test::random_frame(rng, w, h);
    EXPECT_EQ(mse(a, b), mse(b, a));
    EXPECT_EQ(psnr(a, b), psnr(b, a));
    EXPECT_EQ(ssim(a, b), ssim(b, a));
    const double s = ssim(a, b);
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
    EXPECT_EQ(ssim(a, a), 1.0);
  }
}

TEST(MetricProperties, AdditiveConstantGivesExactRmse) {
  Rng rng(5);
  for (int k : {1, 3, 17, 100}) {
    Frame a(19, 13);
    for (auto& v : a.samples()) v = static_cast<std::uint8_t>(uniform_int(rng, 0, 255 - k));
    Frame b = a;
    for (auto& v : b.samples()) v = static_cast<std::uint8_t>(v + k);
    EXPECT_EQ(rmse(a, b), static_cast<double>(k));
  }
}

TEST(SegmentQuality, IdenticalSequences) {
  const std::vector<Frame> seq{test::random_frame(1, 16, 16), test::random_frame(2, 16, 16)};
  const QualityReport q = segment_quality(seq, seq);
  EXPECT_TRUE(is_infinite_psnr(q.psnr));
  EXPECT_EQ(q.ssim, 1.0);
  EXPECT_EQ(q.rmse, 0.0);
  EXPECT_EQ(q.frame_count, 2u);
}

TEST(SegmentQuality, MeanOfFinitePsnr) {
  const Frame base = Frame::filled(100, 100, 0);
  const std::vector<Frame> original{base, base};
  // 3 spikes give 40 dB, 30 spikes give 30 dB.
  const std::vector<Frame> degraded{with_spikes(base, 3), with_spikes(base, 30)};
  EXPECT_NEAR(segment_quality(original, degraded).psnr, 35.0, 1e-9);

  const std::vector<Frame> one_identical{base, with_spikes(base, 30)};
  EXPECT_NEAR(segment_quality(original, one_identical).psnr, 30.0, 1e-9);
  EXPECT_NEAR(segment_psnr(original, one_identical), 30.0, 1e-9);
}

TEST(SegmentQuality, Errors) {
  const std::vector<Frame> none;
  const std::vector<Frame> one{Frame(12, 12)};
  const std::vector<Frame> two{Frame(12, 12), Frame(12, 12)};
  try {
    segment_quality(none, none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySequence);
  }
  try {
    segment_quality(one, two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

}  // namespace
}  // namespace eblc
