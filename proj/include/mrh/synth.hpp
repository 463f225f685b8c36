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

#ifndef MRH_SYNTH_HPP_
#define MRH_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "mrh/manifest.hpp"

namespace mrh {

// Synthetic labelled dataset: each person is a distinct band-limited random
// texture; frames perturb it photometrically (noise_sigma also scales the
// brightness/contrast jitter, so zero means byte-identical frames) and
// geometrically (emitted eye coordinates carry errors, so downstream
// alignment mis-crops the face the way an imperfect eye localiser would).
struct SynthSpec {
  int persons = 10;
  int enroll_videos_per_person = 5;
  int probe_videos_per_person = 5;
  // Extra identities that only carry training-role videos (dictionary and
  // cohort material).
  int train_persons = 8;
  int train_videos_per_person = 1;
  int frames_per_video = 40;
  double noise_sigma = 0.0;  // pixel noise, gray levels
  double crop_jitter = 0.0;  // eye-coordinate error bound, fraction of 64 px
  // When non-empty, each frame draws one inter-eye scale factor from this
  // list; distinct factors yield distinctly sized crops after alignment.
  std::vector<double> scale_modes;
  std::uint64_t seed = 0;
};

// Per-frame generation record, written alongside the dataset; lets tests
// compare emitted confidences and cluster assignments against the injected
// perturbations.
struct FrameTruth {
  std::string person_id;
  std::string video_id;
  int frame_index = 0;
  double jitter_magnitude = 0.0;  // eye displacement, pixels
  int scale_mode = -1;            // index into scale_modes, -1 if unused
};

struct SynthOutput {
  DatasetManifest manifest;
  std::vector<FrameTruth> truth;
};

// Writes images (PGM), manifest.json, and ground_truth.json under out_dir.
// Byte-identical outputs for identical (spec, out_dir contentwise).
SynthOutput generate_dataset(const SynthSpec& spec, const std::string& out_dir);

}  // namespace mrh

#endif  // MRH_SYNTH_HPP_
