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

#include "mrh/align.hpp"

#include <cmath>

namespace mrh {

std::pair<Point, Point> approximate_eyes(const Rect& face_box) {
  if (!(face_box.w > 0.0) || !(face_box.h > 0.0)) {
    throw DataError("degenerate face box (non-positive width or height)");
  }
  const double row = face_box.y + 0.38 * face_box.h;
  return {Point{face_box.x + 0.30 * face_box.w, row},
          Point{face_box.x + 0.70 * face_box.w, row}};
}

namespace {

inline double bilinear_sample(const Image& image, double sx, double sy) {
  const double fx = std::floor(sx);
  const double fy = std::floor(sy);
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const double ax = sx - fx;
  const double ay = sy - fy;

  auto at = [&](int y, int x) -> double {
    if (y < 0 || x < 0 || y >= image.rows() || x >= image.cols()) return 0.0;
    return image(y, x);
  };

  const double top = (1.0 - ax) * at(y0, x0) + ax * at(y0, x0 + 1);
  const double bottom = (1.0 - ax) * at(y0 + 1, x0) + ax * at(y0 + 1, x0 + 1);
  return (1.0 - ay) * top + ay * bottom;
}

}  // namespace

Image align_crop(const Image& image, const Point& left_eye,
                 const Point& right_eye) {
  if (image.size() == 0) throw DataError("empty input image");
  const double dx = right_eye.x - left_eye.x;
  const double dy = right_eye.y - left_eye.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) throw DataError("coincident eye points");

  // Treat points as complex numbers: q = a*(p - left) + c_left with
  // a = (c_right - c_left)/(right - left) sends the eye pair onto the
  // canonical pair. Sampling inverts it: p = left + (q - c_left)*(d/span)
  // where d = right - left and span = |c_right - c_left|.
  const double span = kCanonicalRightEye.x - kCanonicalLeftEye.x;
  const double inv_r = dx / span;
  const double inv_i = dy / span;

  Image out(kCropSize, kCropSize);
  for (int v = 0; v < kCropSize; ++v) {
    for (int u = 0; u < kCropSize; ++u) {
      const double qx = static_cast<double>(u) - kCanonicalLeftEye.x;
      const double qy = static_cast<double>(v) - kCanonicalLeftEye.y;
      const double sx = left_eye.x + qx * inv_r - qy * inv_i;
      const double sy = left_eye.y + qx * inv_i + qy * inv_r;
      out(v, u) = bilinear_sample(image, sx, sy);
    }
  }
  return out;
}

}  // namespace mrh
