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

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <mutex>

#include "eblc/codec.hpp"
#include "eblc/error.hpp"
#include "eblc/io.hpp"

namespace fs = std::filesystem;

namespace eblc {
namespace {

std::mutex& executable_mutex(const std::string& exe) {
  static std::mutex registry_mutex;
  static std::map<std::string, std::mutex> registry;
  std::lock_guard lock(registry_mutex);
  return registry[exe];
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string substitute(std::string text, const std::map<std::string, std::string>& vars) {
  for (const auto& [key, value] : vars) {
    const std::string token = "{" + key + "}";
    for (auto pos = text.find(token); pos != std::string::npos;
         pos = text.find(token, pos + value.size())) {
      text.replace(pos, token.size(), value);
    }
  }
  return text;
}

std::string frame_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06zu.ppm", index);
  return buf;
}

class ScratchDir {
 public:
  explicit ScratchDir(const fs::path& base) {
    static std::atomic<unsigned> counter{0};
    const fs::path root = base.empty() ? fs::temp_directory_path() : base;
    path_ = root / ("eblc-ext-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void run_tool(const std::string& command, const char* stage) {
  const int status = std::system(command.c_str());
  if (status != 0) {
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : status;
    throw Error(ErrorCode::ExternalEncoderFailure,
                std::string(stage) + " exited with status " + std::to_string(code) +
                    ": " + command);
  }
}

}  // namespace

ExternalCodec::ExternalCodec(ExternalCodecConfig config) : config_(std::move(config)) {
  if (!config_.enabled) {
    throw Error(ErrorCode::InvalidArgument,
                "external encoder is disabled; set codec.external.enabled");
  }
  if (config_.executable.empty()) {
    throw Error(ErrorCode::InvalidArgument, "external encoder executable not configured");
  }
}

CompressedSegment ExternalCodec::encode(std::span<const Frame> frames, int crf) const {
  if (frames.empty()) throw Error(ErrorCode::EmptySequence, "encode of zero frames");
  const CompressionProfile profile(CodecId::External, crf);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (!frames[i].same_shape(frames[0])) {
      throw Error(ErrorCode::MixedDimensions, "frame " + std::to_string(i));
    }
  }
  std::lock_guard lock(executable_mutex(config_.executable));
  ScratchDir scratch(config_.scratch_dir);
  const fs::path input_dir = scratch.path() / "in";
  fs::create_directories(input_dir);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    save_raster(frames[i], input_dir / frame_name(i));
  }
  const fs::path output = scratch.path() / ("segment." + config_.container);
  const std::string crf_flag =
      substitute(config_.crf_flag_template, {{"crf", std::to_string(crf)}});
  run_tool(substitute(config_.encode_template,
                      {{"exe", shell_quote(config_.executable)},
                       {"input_dir", shell_quote(input_dir.string())},
                       {"output", shell_quote(output.string())},
                       {"crf_flag", crf_flag},
                       {"fps", std::to_string(config_.fps)}}),
           "encoder");
  CompressedSegment seg{profile, read_file(output),
                        static_cast<std::uint32_t>(frames.size()),
                        static_cast<std::uint32_t>(frames[0].width()),
                        static_cast<std::uint32_t>(frames[0].height())};
  return seg;
}

std::vector<Frame> ExternalCodec::decode(const CompressedSegment& seg) const {
  std::lock_guard lock(executable_mutex(config_.executable));
  ScratchDir scratch(config_.scratch_dir);
  const fs::path input = scratch.path() / ("segment." + config_.container);
  write_file_atomic(input, seg.payload);
  const fs::path output_dir = scratch.path() / "out";
  fs::create_directories(output_dir);
  run_tool(substitute(config_.decode_template,
                      {{"exe", shell_quote(config_.executable)},
                       {"input", shell_quote(input.string())},
                       {"output_dir", shell_quote(output_dir.string())}}),
           "decoder");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(output_dir)) {
    if (entry.path().extension() == ".ppm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.size() != seg.frame_count) {
    throw Error(ErrorCode::CorruptPayload,
                "decoder produced " + std::to_string(files.size()) + " frames, expected " +
                    std::to_string(seg.frame_count));
  }
  std::vector<Frame> frames;
  for (const auto& f : files) {
    auto frame = load_raster(f);
    if (frame.width() != static_cast<int>(seg.width) ||
        frame.height() != static_cast<int>(seg.height)) {
      throw Error(ErrorCode::CorruptPayload, "decoded frame " + f.filename().string() +
                                                 " has wrong dimensions");
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

}  // namespace eblc
