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

#ifndef MRH_SELECTION_HPP_
#define MRH_SELECTION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "mrh/manifest.hpp"

namespace mrh {

enum class SelectionMethod { kSequential, kRandom, kConfidence };

std::string to_string(SelectionMethod method);
SelectionMethod selection_method_from_string(const std::string& name);

struct SelectionSpec {
  SelectionMethod method = SelectionMethod::kSequential;
  int m = 1;
  std::uint64_t seed = 0;  // random method only
};

// Indices into video.frames of the selected faces, ascending (chronological).
// When m exceeds the number of faces, every face is selected and `truncated`
// is set.
struct SelectionResult {
  std::vector<int> indices;
  bool truncated = false;
};

// The first min(m, N) faces in chronological order.
SelectionResult select_sequential(const VideoEntry& video, int m);

// min(m, N) distinct faces drawn uniformly without replacement
// (Fisher-Yates partial shuffle of the index range), then sorted by frame
// index. Deterministic for a fixed seed.
SelectionResult select_random(const VideoEntry& video, int m,
                              std::uint64_t seed);

// The min(m, N) faces with the highest detection confidence, ties broken
// toward the earlier frame, output sorted by frame index.
SelectionResult select_by_confidence(const VideoEntry& video, int m);

SelectionResult select_faces(const VideoEntry& video, const SelectionSpec& spec);

}  // namespace mrh

#endif  // MRH_SELECTION_HPP_
