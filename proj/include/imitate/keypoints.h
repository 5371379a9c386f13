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

#ifndef IMITATE_KEYPOINTS_H_
#define IMITATE_KEYPOINTS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imitate {

inline constexpr int kKeypointCount = 18;

// OpenPose COCO-18 ordering.
enum class KeypointId : int {
  kNose = 0,
  kNeck,
  kRShoulder,
  kRElbow,
  kRWrist,
  kLShoulder,
  kLElbow,
  kLWrist,
  kRHip,
  kRKnee,
  kRAnkle,
  kLHip,
  kLKnee,
  kLAnkle,
  kREye,
  kLEye,
  kREar,
  kLEar,
};

std::string_view KeypointName(KeypointId id);
std::optional<KeypointId> KeypointFromName(std::string_view name);
std::span<const KeypointId> AllKeypoints();

// Pixel coordinates in the image frame (y grows downward). `present` is false
// for keypoints the detector did not find; x and y are meaningless then.
struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;
  bool present = false;

  bool operator==(const Keypoint&) const = default;
};

struct KeypointFrame {
  std::array<Keypoint, kKeypointCount> keypoints{};
  std::int64_t timestamp = 0;

  const Keypoint& operator[](KeypointId id) const {
    return keypoints[static_cast<int>(id)];
  }
  Keypoint& operator[](KeypointId id) {
    return keypoints[static_cast<int>(id)];
  }

  bool operator==(const KeypointFrame&) const = default;
};

// Time-ordered keypoint frames. Timestamps are frame indices 0, 1, 2, ...
class KeypointSequence {
 public:
  // Renumbers timestamps from 0. Throws kUsage if frame_rate <= 0.
  KeypointSequence(std::vector<KeypointFrame> frames, double frame_rate);

  const std::vector<KeypointFrame>& frames() const { return frames_; }
  double frame_rate() const { return frame_rate_; }
  std::size_t size() const { return frames_.size(); }
  bool empty() const { return frames_.empty(); }
  const KeypointFrame& operator[](std::size_t i) const { return frames_[i]; }

  std::size_t MissingCount() const;

  bool operator==(const KeypointSequence&) const = default;

 private:
  std::vector<KeypointFrame> frames_;
  double frame_rate_;
};

struct IngestOptions {
  // Keypoints below this confidence are treated as missing.
  double confidence_threshold = 0.05;
  // Used when the input carries no frame rate (per-frame directories).
  double default_frame_rate = 30.0;
  // Overrides whatever the file says.
  std::optional<double> frame_rate_override;
};

// Reads either a single JSON sequence file or a directory of per-frame
// OpenPose JSON files. See docs/file_formats.md for the layouts.
KeypointSequence ParseKeypointFile(const std::filesystem::path& path,
                                   const IngestOptions& options = {});

KeypointSequence ParseKeypointJson(std::string_view text,
                                   const IngestOptions& options = {});

// Writes the nested `frames` layout. Coordinates are written with round-trip
// precision, so parsing the result reproduces the sequence exactly.
std::string SerializeKeypointJson(const KeypointSequence& sequence);

// Fills missing keypoints track by track. Interior runs of at most `max_gap`
// frames are linearly interpolated per coordinate; runs touching either end
// of the sequence copy the nearest present keypoint. Longer interior runs
// stay missing. Only the listed tracks are touched; a listed track with no
// present keypoint at all throws kData.
KeypointSequence FillGaps(const KeypointSequence& sequence, int max_gap,
                          std::span<const KeypointId> tracks = AllKeypoints());

}  // namespace imitate

#endif  // IMITATE_KEYPOINTS_H_
