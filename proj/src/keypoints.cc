// Copyright 2026 The Imitate Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "imitate/keypoints.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "imitate/error.h"
#include "json.hpp"

namespace imitate {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, kKeypointCount> kNames = {
    "nose",    "neck",   "r-shoulder", "r-elbow",  "r-wrist", "l-shoulder",
    "l-elbow", "l-wrist", "r-hip",     "r-knee",   "r-ankle", "l-hip",
    "l-knee",  "l-ankle", "r-eye",     "l-eye",    "r-ear",   "l-ear",
};

constexpr std::array<KeypointId, kKeypointCount> kAll = [] {
  std::array<KeypointId, kKeypointCount> ids{};
  for (int i = 0; i < kKeypointCount; ++i) ids[i] = static_cast<KeypointId>(i);
  return ids;
}();

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowData("cannot open keypoint file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::size_t LineOfByte(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + byte, '\n'));
}

json ParseJson(std::string_view text, const std::string& origin) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    ThrowData(origin + ": parse error at line " +
              std::to_string(LineOfByte(text, e.byte)) + ": " + e.what());
  }
}

double Number(const json& value, const std::string& where) {
  if (!value.is_number()) ThrowData(where + ": expected a number");
  return value.get<double>();
}

Keypoint MakeKeypoint(double x, double y, double confidence,
                      const IngestOptions& options, const std::string& where) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    ThrowData(where + ": confidence outside [0, 1]");
  }
  Keypoint kp;
  kp.x = x;
  kp.y = y;
  kp.confidence = confidence;
  kp.present = confidence > 0.0 && confidence >= options.confidence_threshold;
  return kp;
}

// Accepts either 18 [x, y, c] triples or the flat 54-number layout.
KeypointFrame ParseFrame(const json& value, std::size_t index,
                         const IngestOptions& options) {
  const std::string where = "frame " + std::to_string(index);
  if (!value.is_array()) ThrowData(where + ": expected an array");
  KeypointFrame frame;
  frame.timestamp = static_cast<std::int64_t>(index);

  const bool flat = !value.empty() && value.front().is_number();
  if (flat) {
    if (value.size() != 3 * kKeypointCount) {
      ThrowData(where + ": expected " + std::to_string(3 * kKeypointCount) +
                " numbers in flat layout, got " + std::to_string(value.size()));
    }
    for (int k = 0; k < kKeypointCount; ++k) {
      const std::string kw = where + " keypoint " + std::to_string(k);
      frame.keypoints[k] = MakeKeypoint(
          Number(value[3 * k], kw), Number(value[3 * k + 1], kw),
          Number(value[3 * k + 2], kw), options, kw);
    }
    return frame;
  }

  if (value.size() != kKeypointCount) {
    ThrowData(where + ": expected " + std::to_string(kKeypointCount) +
              " keypoints, got " + std::to_string(value.size()));
  }
  for (int k = 0; k < kKeypointCount; ++k) {
    const std::string kw = where + " keypoint " + std::to_string(k);
    const json& triple = value[k];
    if (!triple.is_array() || triple.size() != 3) {
      ThrowData(kw + ": expected [x, y, confidence]");
    }
    frame.keypoints[k] = MakeKeypoint(Number(triple[0], kw),
                                      Number(triple[1], kw),
                                      Number(triple[2], kw), options, kw);
  }
  return frame;
}

// One file of a per-frame directory: an OpenPose `people` document, or a bare
// frame array.
KeypointFrame ParseFrameDocument(const json& doc, std::size_t index,
                                 const std::string& origin,
                                 const IngestOptions& options) {
  if (doc.is_object() && doc.contains("people")) {
    const json& people = doc["people"];
    if (!people.is_array()) ThrowData(origin + ": `people` is not an array");
    if (people.empty()) {
      KeypointFrame frame;
      frame.timestamp = static_cast<std::int64_t>(index);
      return frame;
    }
    const json& person = people.front();
    if (!person.contains("pose_keypoints_2d")) {
      ThrowData(origin + ": missing pose_keypoints_2d");
    }
    return ParseFrame(person["pose_keypoints_2d"], index, options);
  }
  return ParseFrame(doc, index, options);
}

double ResolveFrameRate(std::optional<double> from_file,
                        const IngestOptions& options) {
  if (options.frame_rate_override) return *options.frame_rate_override;
  if (from_file) return *from_file;
  return options.default_frame_rate;
}

KeypointSequence ParseDirectory(const std::filesystem::path& dir,
                                const IngestOptions& options) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) ThrowData("no .json frame files in " + dir.string());

  std::vector<KeypointFrame> frames;
  frames.reserve(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    const std::string text = ReadFile(files[i]);
    const json doc = ParseJson(text, files[i].string());
    frames.push_back(ParseFrameDocument(doc, i, files[i].string(), options));
  }
  return KeypointSequence(std::move(frames),
                          ResolveFrameRate(std::nullopt, options));
}

}  // namespace

std::string_view KeypointName(KeypointId id) {
  return kNames[static_cast<int>(id)];
}

std::optional<KeypointId> KeypointFromName(std::string_view name) {
  for (int i = 0; i < kKeypointCount; ++i) {
    if (kNames[i] == name) return static_cast<KeypointId>(i);
  }
  return std::nullopt;
}

std::span<const KeypointId> AllKeypoints() { return kAll; }

KeypointSequence::KeypointSequence(std::vector<KeypointFrame> frames,
                                   double frame_rate)
    : frames_(std::move(frames)), frame_rate_(frame_rate) {
  if (!(frame_rate_ > 0.0)) ThrowUsage("frame rate must be positive");
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    frames_[i].timestamp = static_cast<std::int64_t>(i);
  }
}

std::size_t KeypointSequence::MissingCount() const {
  std::size_t missing = 0;
  for (const auto& frame : frames_) {
    for (const auto& kp : frame.keypoints) missing += kp.present ? 0 : 1;
  }
  return missing;
}

KeypointSequence ParseKeypointJson(std::string_view text,
                                   const IngestOptions& options) {
  const json doc = ParseJson(text, "keypoint json");
  if (!doc.is_object()) ThrowData("keypoint json: expected an object");
  if (!doc.contains("frames") || !doc["frames"].is_array()) {
    ThrowData("keypoint json: missing `frames` array");
  }
  std::optional<double> frame_rate;
  if (doc.contains("frame_rate")) {
    frame_rate = Number(doc["frame_rate"], "frame_rate");
    if (!(*frame_rate > 0.0)) ThrowData("frame_rate must be positive");
  }
  const json& frames_json = doc["frames"];
  std::vector<KeypointFrame> frames;
  frames.reserve(frames_json.size());
  for (std::size_t i = 0; i < frames_json.size(); ++i) {
    frames.push_back(ParseFrame(frames_json[i], i, options));
  }
  return KeypointSequence(std::move(frames),
                          ResolveFrameRate(frame_rate, options));
}

KeypointSequence ParseKeypointFile(const std::filesystem::path& path,
                                   const IngestOptions& options) {
  if (std::filesystem::is_directory(path)) return ParseDirectory(path, options);
  if (!std::filesystem::exists(path)) {
    ThrowData("keypoint file not found: " + path.string());
  }
  const std::string text = ReadFile(path);
  try {
    return ParseKeypointJson(text, options);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string SerializeKeypointJson(const KeypointSequence& sequence) {
  json frames = json::array();
  for (const auto& frame : sequence.frames()) {
    json kps = json::array();
    for (const auto& kp : frame.keypoints) {
      kps.push_back(json::array({kp.x, kp.y, kp.confidence}));
    }
    frames.push_back(std::move(kps));
  }
  json doc;
  doc["frame_rate"] = sequence.frame_rate();
  doc["frames"] = std::move(frames);
  return doc.dump() + "\n";
}

KeypointSequence FillGaps(const KeypointSequence& sequence, int max_gap,
                          std::span<const KeypointId> tracks) {
  if (max_gap < 0) ThrowUsage("max_gap must be >= 0");
  std::vector<KeypointFrame> frames = sequence.frames();
  const std::size_t n = frames.size();

  for (KeypointId id : tracks) {
    const int k = static_cast<int>(id);
    std::vector<std::size_t> present;
    for (std::size_t t = 0; t < n; ++t) {
      if (frames[t].keypoints[k].present) present.push_back(t);
    }
    if (n == 0) continue;
    if (present.empty()) {
      ThrowData("keypoint '" + std::string(KeypointName(id)) +
                "' is missing in every frame");
    }

    const Keypoint first = frames[present.front()].keypoints[k];
    for (std::size_t t = 0; t < present.front(); ++t) {
      frames[t].keypoints[k] = first;
    }
    const Keypoint last = frames[present.back()].keypoints[k];
    for (std::size_t t = present.back() + 1; t < n; ++t) {
      frames[t].keypoints[k] = last;
    }

    for (std::size_t i = 0; i + 1 < present.size(); ++i) {
      const std::size_t a = present[i];
      const std::size_t b = present[i + 1];
      const std::size_t gap = b - a - 1;
      if (gap == 0 || gap > static_cast<std::size_t>(max_gap)) continue;
      const Keypoint& ka = frames[a].keypoints[k];
      const Keypoint& kb = frames[b].keypoints[k];
      for (std::size_t t = a + 1; t < b; ++t) {
        const double s = static_cast<double>(t - a) / static_cast<double>(b - a);
        Keypoint& kp = frames[t].keypoints[k];
        kp.x = ka.x + s * (kb.x - ka.x);
        kp.y = ka.y + s * (kb.y - ka.y);
        kp.confidence = std::min(ka.confidence, kb.confidence);
        kp.present = true;
      }
    }
  }
  return KeypointSequence(std::move(frames), sequence.frame_rate());
}

}  // namespace imitate
