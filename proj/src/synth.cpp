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

#include "mrh/synth.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mrh/image.hpp"
#include "mrh/rng.hpp"

namespace mrh {

namespace {

constexpr int kSourceSize = 128;
// Nominal geometry in the source image: eyes on row 54, 40 px apart. The
// matching detection box puts the standard eye approximation on the same
// spots.
constexpr double kEyeRow = 54.0;
constexpr double kEyeLeftX = 44.0;
constexpr double kEyeRightX = 84.0;
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Textures are band-limited sums of cosine waves (wavelengths above ~12 px,
// so bilinear resampling keeps the pattern intact while 8x8 blocks still see
// structure). Every identity shares a common wave set and adds a weaker
// personal one: like real faces, identities mostly look alike, and telling
// them apart from a single noisy frame is genuinely hard.
struct Wave {
  double fx, fy, phase, amp;
};

std::vector<Wave> draw_waves(Rng& rng, int count, double amp_scale) {
  std::vector<Wave> waves(static_cast<std::size_t>(count));
  for (auto& w : waves) {
    const double freq = 0.015 + 0.065 * rng.next_double();
    const double angle = kTwoPi * rng.next_double();
    w.fx = freq * std::cos(angle);
    w.fy = freq * std::sin(angle);
    w.phase = kTwoPi * rng.next_double();
    w.amp = amp_scale * (0.4 + 0.6 * rng.next_double());
  }
  return waves;
}

constexpr int kSharedWaves = 16;
constexpr int kPersonalWaves = 8;
constexpr double kPersonalAmplitude = 0.35;

// Shared plus personal waves, rescaled to mean 128 / std 40 and clamped.
Image base_texture(const std::vector<Wave>& shared,
                   const std::vector<Wave>& personal) {
  Image img = Image::Zero(kSourceSize, kSourceSize);
  auto add = [&](const std::vector<Wave>& waves) {
    for (const auto& w : waves) {
      for (int y = 0; y < kSourceSize; ++y) {
        for (int x = 0; x < kSourceSize; ++x) {
          img(y, x) += w.amp * std::cos(kTwoPi * (w.fx * x + w.fy * y) +
                                        w.phase);
        }
      }
    }
  };
  add(shared);
  add(personal);
  const double mean = img.mean();
  const double sd = std::sqrt((img.array() - mean).square().mean());
  img = (img.array() - mean) * (40.0 / sd) + 128.0;
  return img.cwiseMax(0.0).cwiseMin(255.0);
}

std::string frame_image_name(const std::string& person,
                             const std::string& video, int frame) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%03d.pgm", frame);
  return "images/" + person + "/" + video + "/" + std::string(buf);
}

}  // namespace

SynthOutput generate_dataset(const SynthSpec& spec,
                             const std::string& out_dir) {
  if (spec.persons < 1 || spec.frames_per_video < 1 ||
      spec.enroll_videos_per_person < 0 || spec.probe_videos_per_person < 0 ||
      spec.train_persons < 0) {
    throw DataError("invalid synthetic dataset spec");
  }
  if (spec.noise_sigma < 0.0 || spec.crop_jitter < 0.0 ||
      spec.crop_jitter > 0.3) {
    throw DataError("noise_sigma must be >= 0 and crop_jitter in [0, 0.3]");
  }
  for (double s : spec.scale_modes) {
    if (!(s > 0.0)) throw DataError("scale modes must be positive");
  }

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create output directory: " + out_dir);

  SynthOutput out;
  out.manifest.base_dir = out_dir;
  Rng rng(spec.seed);
  const std::vector<Wave> shared_waves = draw_waves(rng, kSharedWaves, 1.0);

  const double jitter_px = spec.crop_jitter * 64.0;
  const double eye_mid = 0.5 * (kEyeLeftX + kEyeRightX);
  const double eye_half_span = 0.5 * (kEyeRightX - kEyeLeftX);

  auto emit_person = [&](const std::string& person_id, int video_count,
                         int probe_count) {
    PersonEntry person;
    person.person_id = person_id;
    const Image base = base_texture(
        shared_waves, draw_waves(rng, kPersonalWaves, kPersonalAmplitude));

    int video_serial = 0;
    auto emit_video = [&](VideoRole role, int count) {
      for (int v = 0; v < count; ++v) {
        VideoEntry video;
        video.role = role;
        video.video_id =
            to_string(role).substr(0, 1) + std::to_string(video_serial++);
        for (int f = 0; f < spec.frames_per_video; ++f) {
          Image frame = base;
          double contrast = 1.0;
          double brightness = 0.0;
          if (spec.noise_sigma > 0.0) {
            for (int y = 0; y < kSourceSize; ++y) {
              for (int x = 0; x < kSourceSize; ++x) {
                frame(y, x) += spec.noise_sigma * rng.next_gaussian();
              }
            }
            contrast = 1.0 + 0.005 * spec.noise_sigma *
                                 (2.0 * rng.next_double() - 1.0);
            brightness = spec.noise_sigma * (2.0 * rng.next_double() - 1.0);
          }
          frame = ((frame.array() - 128.0) * contrast + 128.0 + brightness)
                      .cwiseMax(0.0)
                      .cwiseMin(255.0);

          // Geometric error goes into the reported eye coordinates, not the
          // image: the aligner will then mis-crop exactly as a bad eye
          // localiser would.
          double lx = kEyeLeftX, ly = kEyeRow, rx = kEyeRightX, ry = kEyeRow;
          double displacement = 0.0;
          int mode = -1;
          if (!spec.scale_modes.empty()) {
            mode = static_cast<int>(rng.next_below(spec.scale_modes.size()));
            const double scale = spec.scale_modes[static_cast<std::size_t>(mode)];
            lx = eye_mid - eye_half_span * scale;
            rx = eye_mid + eye_half_span * scale;
            displacement += eye_half_span * std::abs(scale - 1.0);
          }
          if (jitter_px > 0.0) {
            const double jlx = jitter_px * (2.0 * rng.next_double() - 1.0);
            const double jly = jitter_px * (2.0 * rng.next_double() - 1.0);
            const double jrx = jitter_px * (2.0 * rng.next_double() - 1.0);
            const double jry = jitter_px * (2.0 * rng.next_double() - 1.0);
            lx += jlx;
            ly += jly;
            rx += jrx;
            ry += jry;
            displacement += 0.5 * (std::hypot(jlx, jly) + std::hypot(jrx, jry));
          }

          FaceRecord rec;
          rec.frame_index = f;
          rec.image_path = frame_image_name(person_id, video.video_id, f);
          rec.face_box = Rect{14.0, 16.0, 100.0, 100.0};
          rec.eyes = {{Point{lx, ly}, Point{rx, ry}}};
          rec.confidence = std::exp(-displacement / 8.0);

          const fs::path img_path = fs::path(out_dir) / rec.image_path;
          fs::create_directories(img_path.parent_path(), ec);
          if (ec) {
            throw DataError("cannot create directory for " + img_path.string());
          }
          save_pgm(img_path.string(), frame);

          out.truth.push_back(FrameTruth{person_id, video.video_id, f,
                                         displacement, mode});
          video.frames.push_back(std::move(rec));
        }
        person.videos.push_back(std::move(video));
      }
    };

    emit_video(VideoRole::kEnroll, video_count);
    emit_video(VideoRole::kProbe, probe_count);
    out.manifest.persons.push_back(std::move(person));
  };

  for (int p = 0; p < spec.persons; ++p) {
    emit_person("p" + std::to_string(p), spec.enroll_videos_per_person,
                spec.probe_videos_per_person);
  }
  for (int p = 0; p < spec.train_persons; ++p) {
    PersonEntry person;
    const std::string person_id = "t" + std::to_string(p);
    person.person_id = person_id;
    const Image base = base_texture(
        shared_waves, draw_waves(rng, kPersonalWaves, kPersonalAmplitude));
    for (int v = 0; v < spec.train_videos_per_person; ++v) {
      VideoEntry video;
      video.role = VideoRole::kTrain;
      video.video_id = "t" + std::to_string(v);
      for (int f = 0; f < spec.frames_per_video; ++f) {
        Image frame = base;
        if (spec.noise_sigma > 0.0) {
          for (int y = 0; y < kSourceSize; ++y) {
            for (int x = 0; x < kSourceSize; ++x) {
              frame(y, x) += spec.noise_sigma * rng.next_gaussian();
            }
          }
          frame = frame.cwiseMax(0.0).cwiseMin(255.0);
        }
        FaceRecord rec;
        rec.frame_index = f;
        rec.image_path = frame_image_name(person_id, video.video_id, f);
        rec.face_box = Rect{14.0, 16.0, 100.0, 100.0};
        rec.eyes = {{Point{kEyeLeftX, kEyeRow}, Point{kEyeRightX, kEyeRow}}};
        rec.confidence = 1.0;

        const fs::path img_path = fs::path(out_dir) / rec.image_path;
        fs::create_directories(img_path.parent_path(), ec);
        if (ec) {
          throw DataError("cannot create directory for " + img_path.string());
        }
        save_pgm(img_path.string(), frame);

        out.truth.push_back(FrameTruth{person_id, video.video_id, f, 0.0, -1});
        video.frames.push_back(std::move(rec));
      }
      person.videos.push_back(std::move(video));
    }
    out.manifest.persons.push_back(std::move(person));
  }

  save_manifest((fs::path(out_dir) / "manifest.json").string(), out.manifest);

  nlohmann::json truth = nlohmann::json::array();
  for (const auto& t : out.truth) {
    truth.push_back({{"person_id", t.person_id},
                     {"video_id", t.video_id},
                     {"frame", t.frame_index},
                     {"jitter", t.jitter_magnitude},
                     {"scale_mode", t.scale_mode}});
  }
  std::ofstream truth_out(fs::path(out_dir) / "ground_truth.json",
                          std::ios::trunc);
  if (!truth_out) throw DataError("cannot write ground truth file");
  truth_out << truth.dump(2) << "\n";

  return out;
}

}  // namespace mrh
