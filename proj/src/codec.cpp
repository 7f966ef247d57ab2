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

#include "eblc/codec.hpp"

#include <algorithm>

#include "eblc/error.hpp"
#include "eblc/kernels.hpp"
#include "eblc/metrics.hpp"

namespace eblc {
namespace {

constexpr std::size_t kMaxLiteral = 128;
constexpr std::size_t kMinRun = 3;
constexpr std::size_t kMaxRun = 130;

void put_u32(std::vector<std::uint8_t>& out, std::size_t at, std::uint32_t v) {
  out[at] = static_cast<std::uint8_t>(v >> 24);
  out[at + 1] = static_cast<std::uint8_t>(v >> 16);
  out[at + 2] = static_cast<std::uint8_t>(v >> 8);
  out[at + 3] = static_cast<std::uint8_t>(v);
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  return (std::uint32_t{in[at]} << 24) | (std::uint32_t{in[at + 1]} << 16) |
         (std::uint32_t{in[at + 2]} << 8) | std::uint32_t{in[at + 3]};
}

}  // namespace

std::string to_string(CodecId id) {
  switch (id) {
    case CodecId::QuantRle: return "quant-rle";
    case CodecId::External: return "external";
  }
  return "unknown";
}

CodecId codec_id_from_string(const std::string& name) {
  if (name == "quant-rle" || name == "builtin") return CodecId::QuantRle;
  if (name == "external") return CodecId::External;
  throw Error(ErrorCode::InvalidArgument, "unknown codec '" + name + "'");
}

CompressionProfile::CompressionProfile(CodecId codec, int crf)
    : codec_(codec), crf_(crf) {
  if (crf < kMinCrf || crf > kMaxCrf) {
    throw Error(ErrorCode::InvalidArgument,
                "crf " + std::to_string(crf) + " outside [0,51]");
  }
}

std::vector<std::uint8_t> rle_encode(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> out;
  out.reserve(bytes.size() + bytes.size() / kMaxLiteral + 1);
  std::size_t i = 0;
  std::size_t literal_start = 0;

  auto flush_literals = [&](std::size_t end) {
    while (literal_start < end) {
      const std::size_t n = std::min(kMaxLiteral, end - literal_start);
      out.push_back(static_cast<std::uint8_t>(n - 1));
      out.insert(out.end(), bytes.begin() + literal_start,
                 bytes.begin() + literal_start + n);
      literal_start += n;
    }
  };

  while (i < bytes.size()) {
    std::size_t run = 1;
    while (i + run < bytes.size() && run < kMaxRun && bytes[i + run] == bytes[i]) {
      ++run;
    }
    if (run >= kMinRun) {
      flush_literals(i);
      out.push_back(static_cast<std::uint8_t>(run + 125));
      out.push_back(bytes[i]);
      i += run;
      literal_start = i;
    } else {
      i += run;
    }
  }
  flush_literals(bytes.size());
  return out;
}

std::vector<std::uint8_t> rle_decode(std::span<const std::uint8_t> bytes,
                                     std::size_t expected) {
  std::vector<std::uint8_t> out;
  out.reserve(expected);
  std::size_t i = 0;
  while (i < bytes.size()) {
    const std::uint8_t control = bytes[i++];
    if (control < 128) {
      const std::size_t n = std::size_t{control} + 1;
      if (i + n > bytes.size() || out.size() + n > expected) {
        throw Error(ErrorCode::CorruptPayload,
                    "literal run overflows payload at offset " + std::to_string(i - 1));
      }
      out.insert(out.end(), bytes.begin() + i, bytes.begin() + i + n);
      i += n;
    } else {
      const std::size_t n = std::size_t{control} - 125;
      if (i >= bytes.size() || out.size() + n > expected) {
        throw Error(ErrorCode::CorruptPayload,
                    "repeat run overflows payload at offset " + std::to_string(i - 1));
      }
      out.insert(out.end(), n, bytes[i++]);
    }
  }
  if (out.size() != expected) {
    throw Error(ErrorCode::CorruptPayload,
                "payload expands to " + std::to_string(out.size()) +
                    " samples, expected " + std::to_string(expected));
  }
  return out;
}

CompressedSegment QuantRleCodec::encode(std::span<const Frame> frames, int crf) const {
  if (frames.empty()) throw Error(ErrorCode::EmptySequence, "encode of zero frames");
  const CompressionProfile profile(CodecId::QuantRle, crf);
  const Frame& first = frames.front();
  std::vector<std::uint8_t> indices;
  indices.resize(first.sample_count() * frames.size());
  const int step = quantizer_step(crf);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    if (!frames[f].same_shape(first)) {
      throw Error(ErrorCode::MixedDimensions,
                  "frame " + std::to_string(f) + " is " +
                      std::to_string(frames[f].width()) + "x" +
                      std::to_string(frames[f].height()) + ", expected " +
                      std::to_string(first.width()) + "x" +
                      std::to_string(first.height()));
    }
    kernels::parallel::quantize(
        frames[f].samples(),
        std::span(indices).subspan(f * first.sample_count(), first.sample_count()),
        step);
  }
  CompressedSegment seg{profile, rle_encode(indices),
                        static_cast<std::uint32_t>(frames.size()),
                        static_cast<std::uint32_t>(first.width()),
                        static_cast<std::uint32_t>(first.height())};
  return seg;
}

std::vector<Frame> QuantRleCodec::decode(const CompressedSegment& seg) const {
  if (seg.width == 0 || seg.height == 0 || seg.frame_count == 0) {
    throw Error(ErrorCode::CorruptPayload, "segment with empty geometry");
  }
  const std::size_t per_frame = std::size_t{seg.width} * seg.height * 3;
  const auto indices = rle_decode(seg.payload, per_frame * seg.frame_count);
  const int step = quantizer_step(seg.profile.crf());
  std::vector<Frame> frames;
  frames.reserve(seg.frame_count);
  for (std::uint32_t f = 0; f < seg.frame_count; ++f) {
    Frame frame(static_cast<int>(seg.width), static_cast<int>(seg.height));
    kernels::parallel::dequantize(std::span(indices).subspan(f * per_frame, per_frame),
                                  frame.samples(), step);
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::vector<std::uint8_t> serialize_segment(const CompressedSegment& seg) {
  std::vector<std::uint8_t> out(kSegmentHeaderBytes, 0);
  out[0] = 'E';
  out[1] = 'B';
  out[2] = 'L';
  out[3] = 'C';
  out[4] = kSegmentVersion;
  out[5] = static_cast<std::uint8_t>(seg.profile.codec());
  out[6] = static_cast<std::uint8_t>(seg.profile.crf());
  put_u32(out, 7, seg.width);
  put_u32(out, 11, seg.height);
  put_u32(out, 15, seg.frame_count);
  out.insert(out.end(), seg.payload.begin(), seg.payload.end());
  return out;
}

CompressedSegment parse_segment(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kSegmentHeaderBytes) {
    throw Error(ErrorCode::CorruptPayload,
                "segment shorter than its 32-byte header (" +
                    std::to_string(bytes.size()) + " bytes)");
  }
  if (bytes[0] != 'E' || bytes[1] != 'B' || bytes[2] != 'L' || bytes[3] != 'C') {
    throw Error(ErrorCode::CorruptPayload, "bad segment magic");
  }
  if (bytes[4] != kSegmentVersion) {
    throw Error(ErrorCode::CorruptPayload,
                "unsupported segment version " + std::to_string(bytes[4]));
  }
  const auto codec = static_cast<CodecId>(bytes[5]);
  if (codec != CodecId::QuantRle && codec != CodecId::External) {
    throw Error(ErrorCode::CorruptPayload, "unknown codec id " + std::to_string(bytes[5]));
  }
  if (bytes[6] > kMaxCrf) {
    throw Error(ErrorCode::CorruptPayload, "crf byte " + std::to_string(bytes[6]));
  }
  CompressedSegment seg{CompressionProfile(codec, bytes[6]),
                        {bytes.begin() + kSegmentHeaderBytes, bytes.end()},
                        get_u32(bytes, 15), get_u32(bytes, 7), get_u32(bytes, 11)};
  return seg;
}

BitrateReport measure_bitrate(const CompressedSegment& seg, double fps) {
  if (!(fps > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "fps must be positive");
  }
  BitrateReport r;
  std::uint64_t bytes = seg.payload.size();
  if (seg.profile.codec() == CodecId::QuantRle) bytes += kSegmentHeaderBytes;
  r.bits_total = 8 * bytes;
  r.duration = seg.duration(fps);
  r.bitrate = static_cast<double>(r.bits_total) / r.duration / 1e6;
  return r;
}

double crf_to_psnr(std::span<const Frame> corpus, const Encoder& codec, int crf) {
  const auto seg = codec.encode(corpus, crf);
  const auto decoded = codec.decode(seg);
  return segment_psnr(corpus, decoded);
}

std::unique_ptr<Encoder> make_builtin_codec() {
  return std::make_unique<QuantRleCodec>();
}

}  // namespace eblc
