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

#include <string>

#include "eblc/error.hpp"
#include "eblc/frame.hpp"

namespace eblc {
namespace {

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::InvalidArgument,
                "frame dimensions must be positive, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

Frame::Frame(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(pixel_count() * kChannels, 0);
}

Frame::Frame(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() != pixel_count() * kChannels) {
    throw Error(ErrorCode::InvalidArgument,
                "frame data length " + std::to_string(data_.size()) +
                    " != width*height*3 = " +
                    std::to_string(pixel_count() * kChannels));
  }
}

Frame Frame::filled(int width, int height, std::uint8_t r, std::uint8_t g,
                    std::uint8_t b) {
  Frame f(width, height);
  auto s = f.samples();
  for (std::size_t i = 0; i < s.size(); i += kChannels) {
    s[i] = r;
    s[i + 1] = g;
    s[i + 2] = b;
  }
  return f;
}

}  // namespace eblc
