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

#include "mrh/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mrh/rng.hpp"

namespace mrh {

std::string to_string(SelectionMethod method) {
  switch (method) {
    case SelectionMethod::kSequential:
      return "sequential";
    case SelectionMethod::kRandom:
      return "random";
    case SelectionMethod::kConfidence:
      return "confidence";
  }
  return "sequential";
}

SelectionMethod selection_method_from_string(const std::string& name) {
  if (name == "sequential") return SelectionMethod::kSequential;
  if (name == "random") return SelectionMethod::kRandom;
  if (name == "confidence") return SelectionMethod::kConfidence;
  throw DataError("unknown selection method: '" + name + "'");
}

namespace {

void check_video(const VideoEntry& video, int m) {
  if (video.frames.empty()) {
    throw DataError("cannot select faces from empty video '" +
                    video.video_id + "'");
  }
  if (m < 1) throw DataError("selection size must be >= 1");
}

}  // namespace

SelectionResult select_sequential(const VideoEntry& video, int m) {
  check_video(video, m);
  const int n = static_cast<int>(video.frames.size());
  SelectionResult result;
  result.truncated = m > n;
  const int take = std::min(m, n);
  result.indices.resize(static_cast<std::size_t>(take));
  std::iota(result.indices.begin(), result.indices.end(), 0);
  return result;
}

SelectionResult select_random(const VideoEntry& video, int m,
                              std::uint64_t seed) {
  check_video(video, m);
  const int n = static_cast<int>(video.frames.size());
  SelectionResult result;
  result.truncated = m > n;
  const int take = std::min(m, n);

  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  Rng rng(seed);
  for (int i = 0; i < take; ++i) {
    const int j =
        i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)],
              pool[static_cast<std::size_t>(j)]);
  }
  result.indices.assign(pool.begin(), pool.begin() + take);
  std::sort(result.indices.begin(), result.indices.end());
  return result;
}

SelectionResult select_by_confidence(const VideoEntry& video, int m) {
  check_video(video, m);
  const int n = static_cast<int>(video.frames.size());
  for (const auto& rec : video.frames) {
    if (std::isnan(rec.confidence)) {
      throw DataError("NaN confidence in video '" + video.video_id + "'");
    }
  }
  SelectionResult result;
  result.truncated = m > n;
  const int take = std::min(m, n);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return video.frames[static_cast<std::size_t>(a)].confidence >
           video.frames[static_cast<std::size_t>(b)].confidence;
  });
  // Frames are chronological, so stable sort already breaks confidence ties
  // toward the earlier frame.
  result.indices.assign(order.begin(), order.begin() + take);
  std::sort(result.indices.begin(), result.indices.end());
  return result;
}

SelectionResult select_faces(const VideoEntry& video,
                             const SelectionSpec& spec) {
  switch (spec.method) {
    case SelectionMethod::kSequential:
      return select_sequential(video, spec.m);
    case SelectionMethod::kRandom:
      return select_random(video, spec.m, spec.seed);
    case SelectionMethod::kConfidence:
      return select_by_confidence(video, spec.m);
  }
  throw DataError("unknown selection method");
}

}  // namespace mrh
