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

#include "mrh/features.hpp"

#include <cmath>

#include "mrh/align.hpp"

namespace mrh {

std::vector<int> block_starts_1d(int region_index, const RegionLayout& layout) {
  // 64 does not divide by 3; regions 0 and 1 get side 20 starting at 0 and
  // 21, the last one gets side 22 and runs to the crop edge.
  const int origin = 21 * region_index;
  const int last = (region_index == 2);
  const int side = last ? (kCropSize - origin) : 20;
  std::vector<int> starts;
  for (int off = 0; off + layout.block_size <= side; off += layout.block_step) {
    int start = origin + off;
    if (start + layout.block_size > kCropSize) {
      start = kCropSize - layout.block_size;
    }
    starts.push_back(start);
  }
  return starts;
}

std::array<std::vector<Block8>, kRegionCount> extract_blocks(
    const Image& face, const RegionLayout& layout) {
  if (face.rows() != kCropSize || face.cols() != kCropSize) {
    throw DataError("face crop must be 64x64");
  }
  std::array<std::vector<Block8>, kRegionCount> regions;
  for (int rr = 0; rr < layout.grid_rows; ++rr) {
    const std::vector<int> row_starts = block_starts_1d(rr, layout);
    for (int rc = 0; rc < layout.grid_cols; ++rc) {
      const std::vector<int> col_starts = block_starts_1d(rc, layout);
      auto& blocks = regions[static_cast<std::size_t>(rr * layout.grid_cols + rc)];
      blocks.reserve(row_starts.size() * col_starts.size());
      for (int y : row_starts) {
        for (int x : col_starts) {
          blocks.emplace_back(face.block<8, 8>(y, x));
        }
      }
    }
  }
  return regions;
}

const Block8& dct8_matrix() {
  static const Block8 c = [] {
    Block8 m;
    const double pi = 3.14159265358979323846264338327950288;
    for (int k = 0; k < 8; ++k) {
      const double scale = (k == 0) ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int n = 0; n < 8; ++n) {
        m(k, n) = scale * std::cos(pi * (2.0 * n + 1.0) * k / 16.0);
      }
    }
    return m;
  }();
  return c;
}

Feature zigzag_features(const Block8& coeffs) {
  // JPEG zig-zag scan; positions after the DC term.
  static constexpr int kRow[kFeatureDim] = {0, 1, 2, 1, 0, 0, 1, 2,
                                            3, 4, 3, 2, 1, 0, 0};
  static constexpr int kCol[kFeatureDim] = {1, 0, 0, 1, 2, 3, 2, 1,
                                            0, 0, 1, 2, 3, 4, 5};
  Feature f;
  for (int i = 0; i < kFeatureDim; ++i) f(i) = coeffs(kRow[i], kCol[i]);
  return f;
}

std::array<FeatureMatrix, kRegionCount> face_features(
    const Image& face, const RegionLayout& layout) {
  const auto regions = extract_blocks(face, layout);
  std::array<FeatureMatrix, kRegionCount> out;
  for (int r = 0; r < kRegionCount; ++r) {
    const auto& blocks = regions[static_cast<std::size_t>(r)];
    FeatureMatrix features(kFeatureDim, static_cast<Eigen::Index>(blocks.size()));
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      features.col(static_cast<Eigen::Index>(i)) =
          zigzag_features(dct2(normalize_block(blocks[i])));
    }
    out[static_cast<std::size_t>(r)] = std::move(features);
  }
  return out;
}

}  // namespace mrh
