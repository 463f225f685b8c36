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

#include "mrh/manifest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "mrh/align.hpp"

namespace mrh {

using nlohmann::json;

std::string to_string(VideoRole role) {
  switch (role) {
    case VideoRole::kEnroll:
      return "enroll";
    case VideoRole::kProbe:
      return "probe";
    case VideoRole::kTrain:
      return "train";
  }
  return "enroll";
}

VideoRole role_from_string(const std::string& name) {
  if (name == "enroll") return VideoRole::kEnroll;
  if (name == "probe") return VideoRole::kProbe;
  if (name == "train") return VideoRole::kTrain;
  throw DataError("unknown video role: '" + name + "'");
}

const PersonEntry* DatasetManifest::find_person(
    const std::string& person_id) const {
  for (const auto& p : persons) {
    if (p.person_id == person_id) return &p;
  }
  return nullptr;
}

namespace {

std::string where(const std::string& person, const std::string& video,
                  int frame = -1) {
  std::string loc = "person '" + person + "'";
  if (!video.empty()) loc += ", video '" + video + "'";
  if (frame >= 0) loc += ", frame " + std::to_string(frame);
  return loc;
}

FaceRecord parse_face(const json& j, const std::string& person,
                      const std::string& video) {
  FaceRecord rec;
  try {
    rec.frame_index = j.at("frame").get<int>();
    rec.image_path = j.at("image").get<std::string>();
    const auto& box = j.at("box");
    if (!box.is_array() || box.size() != 4) {
      throw DataError("'box' must be [x, y, w, h]");
    }
    rec.face_box = Rect{box[0].get<double>(), box[1].get<double>(),
                        box[2].get<double>(), box[3].get<double>()};
    if (j.contains("eyes") && !j.at("eyes").is_null()) {
      const auto& eyes = j.at("eyes");
      if (!eyes.is_array() || eyes.size() != 2 || eyes[0].size() != 2 ||
          eyes[1].size() != 2) {
        throw DataError("'eyes' must be [[lx, ly], [rx, ry]] or null");
      }
      rec.eyes = {{Point{eyes[0][0].get<double>(), eyes[0][1].get<double>()},
                   Point{eyes[1][0].get<double>(), eyes[1][1].get<double>()}}};
    }
    rec.confidence = j.at("confidence").get<double>();
  } catch (const json::exception& e) {
    throw DataError("bad face record in " + where(person, video) + ": " +
                    e.what());
  }

  if (rec.frame_index < 0) {
    throw DataError("negative frame index in " + where(person, video));
  }
  if (!(rec.face_box.w > 0.0) || !(rec.face_box.h > 0.0)) {
    throw DataError("face box must have positive size in " +
                    where(person, video, rec.frame_index));
  }
  if (rec.eyes && !(rec.eyes->first.x < rec.eyes->second.x)) {
    throw DataError("left eye must be left of right eye in " +
                    where(person, video, rec.frame_index));
  }
  if (std::isnan(rec.confidence)) {
    throw DataError("confidence is NaN in " +
                    where(person, video, rec.frame_index));
  }
  return rec;
}

}  // namespace

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError("manifest parse error in " + path + ": " + e.what());
  }

  DatasetManifest manifest;
  manifest.base_dir = std::filesystem::path(path).parent_path().string();

  if (!root.contains("persons") || !root["persons"].is_array()) {
    throw DataError("manifest must have a top-level 'persons' array");
  }

  std::set<std::string> person_ids;
  for (const auto& jp : root["persons"]) {
    PersonEntry person;
    try {
      person.person_id = jp.at("person_id").get<std::string>();
    } catch (const json::exception& e) {
      throw DataError(std::string("bad person entry: ") + e.what());
    }
    if (!person_ids.insert(person.person_id).second) {
      throw DataError("duplicate person_id '" + person.person_id + "'");
    }

    std::set<std::string> video_ids;
    for (const auto& jv : jp.value("videos", json::array())) {
      VideoEntry video;
      try {
        video.video_id = jv.at("video_id").get<std::string>();
        video.role = role_from_string(jv.at("role").get<std::string>());
      } catch (const json::exception& e) {
        throw DataError("bad video entry in " + where(person.person_id, "") +
                        ": " + e.what());
      }
      if (!video_ids.insert(video.video_id).second) {
        throw DataError("duplicate video_id '" + video.video_id + "' in " +
                        where(person.person_id, ""));
      }
      for (const auto& jf : jv.value("frames", json::array())) {
        video.frames.push_back(
            parse_face(jf, person.person_id, video.video_id));
      }
      if (video.frames.empty()) {
        throw DataError("empty video in " +
                        where(person.person_id, video.video_id));
      }
      std::sort(video.frames.begin(), video.frames.end(),
                [](const FaceRecord& a, const FaceRecord& b) {
                  return a.frame_index < b.frame_index;
                });
      for (std::size_t i = 1; i < video.frames.size(); ++i) {
        if (video.frames[i].frame_index == video.frames[i - 1].frame_index) {
          throw DataError("duplicate frame index " +
                          std::to_string(video.frames[i].frame_index) +
                          " in " +
                          where(person.person_id, video.video_id));
        }
      }
      person.videos.push_back(std::move(video));
    }
    manifest.persons.push_back(std::move(person));
  }
  return manifest;
}

void save_manifest(const std::string& path, const DatasetManifest& manifest) {
  json root;
  root["persons"] = json::array();
  for (const auto& person : manifest.persons) {
    json jp;
    jp["person_id"] = person.person_id;
    jp["videos"] = json::array();
    for (const auto& video : person.videos) {
      json jv;
      jv["video_id"] = video.video_id;
      jv["role"] = to_string(video.role);
      jv["frames"] = json::array();
      for (const auto& rec : video.frames) {
        json jf;
        jf["frame"] = rec.frame_index;
        jf["image"] = rec.image_path;
        jf["box"] = {rec.face_box.x, rec.face_box.y, rec.face_box.w,
                     rec.face_box.h};
        if (rec.eyes) {
          jf["eyes"] = {{rec.eyes->first.x, rec.eyes->first.y},
                        {rec.eyes->second.x, rec.eyes->second.y}};
        } else {
          jf["eyes"] = nullptr;
        }
        jf["confidence"] = rec.confidence;
        jv["frames"].push_back(std::move(jf));
      }
      jp["videos"].push_back(std::move(jv));
    }
    root["persons"].push_back(std::move(jp));
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write manifest: " + path);
  out << root.dump(2) << "\n";
  if (!out) throw DataError("I/O failure writing " + path);
}

std::string resolve_image_path(const DatasetManifest& manifest,
                               const FaceRecord& record) {
  std::filesystem::path p(record.image_path);
  if (p.is_absolute() || manifest.base_dir.empty()) return record.image_path;
  return (std::filesystem::path(manifest.base_dir) / p).string();
}

std::pair<Point, Point> effective_eyes(const FaceRecord& record) {
  if (record.eyes) return *record.eyes;
  return approximate_eyes(record.face_box);
}

}  // namespace mrh
