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

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "eblc/frame.hpp"

namespace eblc {

inline constexpr int kMinCrf = 0;
inline constexpr int kMaxCrf = 51;

enum class CodecId : std::uint8_t {
  QuantRle = 1,  // built-in
  External = 2,
};

std::string to_string(CodecId id);
CodecId codec_id_from_string(const std::string& name);

/// Codec identity plus the CRF level (0 = lossless, 51 = strongest).
class CompressionProfile {
 public:
  CompressionProfile(CodecId codec, int crf);

  CodecId codec() const noexcept { return codec_; }
  int crf() const noexcept { return crf_; }

  friend bool operator==(const CompressionProfile&, const CompressionProfile&) = default;

 private:
  CodecId codec_;
  int crf_;
};

struct CompressedSegment {
  CompressionProfile profile{CodecId::QuantRle, 0};
  std::vector<std::uint8_t> payload;  // body only, no container header
  std::uint32_t frame_count = 0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;

  double duration(double fps) const { return frame_count / fps; }
};

struct BitrateReport {
  std::uint64_t bits_total = 0;
  double duration = 0.0;  // seconds
  double bitrate = 0.0;   // Mbit/s
};

/// Uniform encoder interface; the detector side only ever sees decoded frames.
class Encoder {
 public:
  virtual ~Encoder() = default;
  virtual CodecId id() const noexcept = 0;
  virtual CompressedSegment encode(std::span<const Frame> frames, int crf) const = 0;
  virtual std::vector<Frame> decode(const CompressedSegment& segment) const = 0;
};

/// Built-in codec: per-sample uniform quantization with step 1 + crf followed
/// by a PackBits-style byte run-length coder over the row-major stream.
class QuantRleCodec final : public Encoder {
 public:
  CodecId id() const noexcept override { return CodecId::QuantRle; }
  CompressedSegment encode(std::span<const Frame> frames, int crf) const override;
  std::vector<Frame> decode(const CompressedSegment& segment) const override;
};

inline int quantizer_step(int crf) noexcept { return 1 + crf; }

// Run-length coder. Control byte c < 128: c + 1 literal bytes follow.
// c >= 128: the next byte repeats c - 125 times (3..130).
std::vector<std::uint8_t> rle_encode(std::span<const std::uint8_t> bytes);
/// Throws CorruptPayload unless the stream expands to exactly `expected` bytes.
std::vector<std::uint8_t> rle_decode(std::span<const std::uint8_t> bytes,
                                     std::size_t expected);

// Container: "EBLC", version, codec id, crf, then width, height and
// frame_count as big-endian u32, zero padded to 32 bytes.
inline constexpr std::size_t kSegmentHeaderBytes = 32;
inline constexpr std::uint8_t kSegmentVersion = 1;

std::vector<std::uint8_t> serialize_segment(const CompressedSegment& segment);
CompressedSegment parse_segment(std::span<const std::uint8_t> bytes);

/// bits_total counts the payload plus, for the built-in codec, its header.
BitrateReport measure_bitrate(const CompressedSegment& segment, double fps);

/// Segment PSNR of decode(encode(corpus, crf)) against corpus.
double crf_to_psnr(std::span<const Frame> corpus, const Encoder& codec, int crf);

/// Adapter around an external encoder executable (for example ffmpeg).
/// Frames travel through P6 raster files in a scratch directory. Disabled
/// unless `enabled` is set; invocations are serialized per executable.
struct ExternalCodecConfig {
  bool enabled = false;
  std::string executable;
  // Placeholders: {exe} {input_dir} {output} {crf_flag} {fps}.
  std::string encode_template =
      "{exe} -y -loglevel error -framerate {fps} -i {input_dir}/frame_%06d.ppm "
      "{crf_flag} {output}";
  // Placeholders: {exe} {input} {output_dir}.
  std::string decode_template =
      "{exe} -y -loglevel error -i {input} {output_dir}/frame_%06d.ppm";
  std::string crf_flag_template = "-c:v libx264 -pix_fmt yuv444p -crf {crf}";
  std::string container = "mkv";
  double fps = 10.0;
  std::filesystem::path scratch_dir;  // empty: system temp directory
};

class ExternalCodec final : public Encoder {
 public:
  explicit ExternalCodec(ExternalCodecConfig config);

  CodecId id() const noexcept override { return CodecId::External; }
  CompressedSegment encode(std::span<const Frame> frames, int crf) const override;
  std::vector<Frame> decode(const CompressedSegment& segment) const override;

 private:
  ExternalCodecConfig config_;
};

std::unique_ptr<Encoder> make_builtin_codec();

}  // namespace eblc
