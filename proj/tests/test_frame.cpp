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
#include <cmath>
#include <functional>
#include <string>

#include "eblc/error.hpp"
#include "eblc/frame.hpp"
#include "eblc/io.hpp"
#include "test_util.hpp"

namespace eblc {
namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) {
  return {s.begin(), s.end()};
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no eblc::Error thrown";
  return ErrorCode::InvalidArgument;
}

TEST(Frame, ShapeAndLength) {
  const Frame f(5, 3);
  EXPECT_EQ(f.sample_count(), 5u * 3u * 3u);
  EXPECT_EQ(f.pixel_count(), 15u);
  for (auto v : f.samples()) EXPECT_EQ(v, 0);
}

TEST(Frame, RejectsBadShapes) {
  EXPECT_EQ(code_of([] { Frame(0, 4); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { Frame(4, -1); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { Frame(2, 2, std::vector<std::uint8_t>(11)); }),
            ErrorCode::InvalidArgument);
}

TEST(Hsl, ForwardExamples) {
  const HslPixel white = rgb_to_hsl(255, 255, 255);
  EXPECT_EQ(white.hue, 0.0);
  EXPECT_EQ(white.saturation, 0.0);
  EXPECT_EQ(white.lightness, 1.0);

  const HslPixel black = rgb_to_hsl(0, 0, 0);
  EXPECT_EQ(black.hue, 0.0);
  EXPECT_EQ(black.saturation, 0.0);
  EXPECT_EQ(black.lightness, 0.0);

  const HslPixel red = rgb_to_hsl(255, 0, 0);
  EXPECT_DOUBLE_EQ(red.hue, 0.0);
  EXPECT_DOUBLE_EQ(red.saturation, 1.0);
  EXPECT_DOUBLE_EQ(red.lightness, 0.5);
}

TEST(Hsl, InverseExamples) {
  EXPECT_EQ(hsl_to_rgb({0.0, 0.0, 1.0}), (Rgb{255, 255, 255}));
  EXPECT_EQ(hsl_to_rgb({120.0, 1.0, 0.5}), (Rgb{0, 255, 0}));
  EXPECT_EQ(hsl_to_rgb({240.0, 1.0, 0.5}), (Rgb{0, 0, 255}));
}

// Every 17th level on each axis covers both ends of the range.
TEST(Hsl, GridInvariantsAndRoundTrip) {
  int worst = 0;
  for (int r = 0; r <= 255; r += 17) {
    for (int g = 0; g <= 255; g += 17) {
      for (int b = 0; b <= 255; b += 17) {
        const HslPixel p = rgb_to_hsl(r, g, b);
        ASSERT_GE(p.hue, 0.0);
        ASSERT_LT(p.hue, 360.0);
        ASSERT_GE(p.saturation, 0.0);
        ASSERT_LE(p.saturation, 1.0);
        ASSERT_GE(p.lightness, 0.0);
        ASSERT_LE(p.lightness, 1.0);
        const Rgb back = hsl_to_rgb(p);
        worst = std::max({worst, std::abs(back.r - r), std::abs(back.g - g),
                          std::abs(back.b - b)});
      }
    }
  }
  EXPECT_LE(worst, 1);
}

TEST(Hsl, AchromaticHueIsZero) {
  for (int v = 0; v <= 255; ++v) EXPECT_EQ(rgb_to_hsl(v, v, v).hue, 0.0);
}

TEST(Raster, SaveLoadRoundTrip) {
  test::TempDir dir;
  const Frame f = test::random_frame(3, 17, 9);
  save_raster(f, dir / "a.ppm");
  const Frame g = load_raster(dir / "a.ppm");
  EXPECT_EQ(f, g);
  // Re-saving what was loaded reproduces the file byte for byte.
  save_raster(g, dir / "b.ppm");
  EXPECT_EQ(read_file(dir / "a.ppm"), read_file(dir / "b.ppm"));
}

TEST(Raster, HeaderLayout) {
  const auto bytes = encode_raster(Frame::filled(2, 1, 7));
  const std::string header(bytes.begin(), bytes.begin() + 11);
  EXPECT_EQ(header, "P6\n2 1\n255\n");
  EXPECT_EQ(bytes.size(), 11u + 6u);
}

TEST(Raster, AcceptsCommentsAndWhitespace) {
  std::string text = "P6 # comment\n 2\t1 255\n";
  text += std::string(6, '\x05');
  const Frame f = decode_raster(bytes_of(text));
  EXPECT_EQ(f.width(), 2);
  EXPECT_EQ(f.samples()[5], 5);
}

TEST(Raster, RejectsWideMaxval) {
  std::string text = "P6\n1 1\n65535\n" + std::string(6, '\0');
  try {
    decode_raster(bytes_of(text));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedMaxval);
    EXPECT_NE(e.detail().find("offset 7"), std::string::npos) << e.detail();
  }
}

TEST(Raster, RejectsTruncatedData) {
  const std::string text = "P6\n4 4\n255\n" + std::string(10, '\0');
  try {
    decode_raster(bytes_of(text));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TruncatedData);
    EXPECT_NE(e.detail().find("offset 11"), std::string::npos) << e.detail();
  }
}

TEST(Raster, RejectsMalformedHeaders) {
  EXPECT_EQ(code_of([] { decode_raster(bytes_of("P3\n1 1\n255\n")); }),
            ErrorCode::MalformedHeader);
  EXPECT_EQ(code_of([] { decode_raster(bytes_of("P6\nx 1\n255\n")); }),
            ErrorCode::MalformedHeader);
  EXPECT_EQ(code_of([] { decode_raster(bytes_of("P6\n0 1\n255\n")); }),
            ErrorCode::MalformedHeader);
  EXPECT_EQ(code_of([] { decode_raster(bytes_of("P6\n1 1\n255")); }),
            ErrorCode::MalformedHeader);
}

TEST(Raster, LoadNamesThePath) {
  test::TempDir dir;
  write_text_atomic(dir / "bad.ppm", "P6\n4 4\n255\n");
  try {
    load_raster(dir / "bad.ppm");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(e.detail().find("bad.ppm"), std::string::npos);
  }
  EXPECT_EQ(code_of([&] { load_raster(dir / "missing.ppm"); }), ErrorCode::IoError);
}

}  // namespace
}  // namespace eblc
