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

#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <string>

#include "eblc/error.hpp"
#include "eblc/frame.hpp"
#include "eblc/io.hpp"

namespace eblc {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }

  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  // Returns the number and the offset where it started.
  std::pair<long long, std::size_t> number(const char* what) {
    skip_separators();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) ++pos_;
    if (pos_ == start) {
      throw Error(ErrorCode::MalformedHeader,
                  std::string("expected ") + what + " at offset " +
                      std::to_string(start));
    }
    long long value = 0;
    const auto* first = reinterpret_cast<const char*>(bytes_.data() + start);
    const auto* last = reinterpret_cast<const char*>(bytes_.data() + pos_);
    if (std::from_chars(first, last, value).ec != std::errc{}) {
      throw Error(ErrorCode::MalformedHeader,
                  std::string(what) + " out of range at offset " +
                      std::to_string(start));
    }
    return {value, start};
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

constexpr long long kMaxSide = 1 << 16;

}  // namespace

Frame decode_raster(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw Error(ErrorCode::MalformedHeader, "missing P6 magic at offset 0");
  }
  HeaderReader reader(bytes.subspan(2));
  const auto [width, w_at] = reader.number("width");
  const auto [height, h_at] = reader.number("height");
  const auto [maxval, m_at] = reader.number("maxval");
  if (width <= 0 || height <= 0 || width > kMaxSide || height > kMaxSide) {
    throw Error(ErrorCode::MalformedHeader,
                "unsupported dimensions " + std::to_string(width) + "x" +
                    std::to_string(height) + " at offset " +
                    std::to_string(w_at + 2));
  }
  if (maxval != 255) {
    throw Error(ErrorCode::UnsupportedMaxval,
                "maxval " + std::to_string(maxval) + " at offset " +
                    std::to_string(m_at + 2) + " (only 255 is supported)");
  }
  std::size_t pos = reader.offset() + 2;
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw Error(ErrorCode::MalformedHeader,
                "expected single whitespace after maxval at offset " +
                    std::to_string(pos));
  }
  ++pos;
  const std::size_t need = static_cast<std::size_t>(width) * height * 3;
  if (bytes.size() - pos < need) {
    throw Error(ErrorCode::TruncatedData,
                "expected " + std::to_string(need) + " sample bytes at offset " +
                    std::to_string(pos) + ", file ends at offset " +
                    std::to_string(bytes.size()));
  }
  (void)h_at;
  std::vector<std::uint8_t> data(bytes.begin() + pos, bytes.begin() + pos + need);
  return Frame(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

std::vector<std::uint8_t> encode_raster(const Frame& frame) {
  const std::string header = "P6\n" + std::to_string(frame.width()) + " " +
                             std::to_string(frame.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto s = frame.samples();
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

Frame load_raster(const std::filesystem::path& path) {
  try {
    return decode_raster(read_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

void save_raster(const Frame& frame, const std::filesystem::path& path) {
  write_file_atomic(path, encode_raster(frame));
}

}  // namespace eblc
