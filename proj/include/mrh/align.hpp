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

#ifndef MRH_ALIGN_HPP_
#define MRH_ALIGN_HPP_

#include <utility>

#include "mrh/types.hpp"

namespace mrh {

// Canonical crop geometry: 64x64 output with the eyes on row 24, 32 pixels
// apart and horizontally centered.
inline constexpr int kCropSize = 64;
inline constexpr Point kCanonicalLeftEye{16.0, 24.0};
inline constexpr Point kCanonicalRightEye{48.0, 24.0};

// Places the eyes inside a detection box when no eye locations are known:
// 30% / 70% of the width, 38% of the height.
std::pair<Point, Point> approximate_eyes(const Rect& face_box);

// Maps the input so the given eyes land on the canonical positions
// (similarity transform: rotation, uniform scale, translation) and samples
// a 64x64 crop with bilinear interpolation. Source pixels outside the image
// read as 0.
Image align_crop(const Image& image, const Point& left_eye,
                 const Point& right_eye);

}  // namespace mrh

#endif  // MRH_ALIGN_HPP_
