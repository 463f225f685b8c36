// Copyright 2026  The mrh authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MRH_MANIFEST_HPP_
#define MRH_MANIFEST_HPP_

#include <optional>
#include <string>
#include <vector>

#include "mrh/types.hpp"

namespace mrh {

enum class VideoRole { kEnroll, kProbe, kTrain };

std::string to_string(VideoRole role);
VideoRole role_from_string(const std::string& name);

// One detected face in one frame. Detection and eye localisation happen
// upstream; this library only consumes their outputs.
struct FaceRecord {
  int frame_index = 0;
  std::string image_path;
  Rect face_box;
  std::optional<std::pair<Point, Point>> eyes;  // (left, right)
  double confidence = 0.0;
};

struct VideoEntry {
  std::string video_id;
  VideoRole role = VideoRole::kEnroll;
  std::vector<FaceRecord> frames;  // ascending, distinct frame_index
};

struct PersonEntry {
  std::string person_id;
  std::vector<VideoEntry> videos;
};

struct DatasetManifest {
  std::vector<PersonEntry> persons;
  // Directory the manifest was loaded from; image paths resolve against it.
  std::string base_dir;

  const PersonEntry* find_person(const std::string& person_id) const;
};

// Loads and validates a manifest. Frames are sorted by frame index; duplicate
// ids, duplicate frame indices, empty videos, and malformed records are
// reported as DataError with the offending field named.
DatasetManifest load_manifest(const std::string& path);

void save_manifest(const std::string& path, const DatasetManifest& manifest);

// Returns record.image_path resolved against the manifest directory.
std::string resolve_image_path(const DatasetManifest& manifest,
                               const FaceRecord& record);

// Eye positions for alignment: the recorded ones if present, otherwise
// approximated from the face box.
std::pair<Point, Point> effective_eyes(const FaceRecord& record);

}  // namespace mrh

#endif  // MRH_MANIFEST_HPP_
