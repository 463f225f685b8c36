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

#ifndef MRH_FEATURES_HPP_
#define MRH_FEATURES_HPP_

#include <array>
#include <vector>

#include "mrh/types.hpp"

namespace mrh {

// Region/block geometry over the 64x64 crop: a 3x3 grid of regions, each
// tiled with 8x8 blocks at a 4-pixel step (50% overlap). Region origins sit
// at multiples of 21; the last region per axis absorbs the remainder up to
// the crop edge. Every region holds a 4x4 grid of blocks.
struct RegionLayout {
  int grid_rows = 3;
  int grid_cols = 3;
  int block_size = 8;
  int block_step = 4;

  int region_count() const { return grid_rows * grid_cols; }
};

// Absolute block start offsets along one axis for the given region index
// (0..2). Blocks are clamped to lie fully inside the crop.
std::vector<int> block_starts_1d(int region_index,
                                 const RegionLayout& layout = {});

// Per-region pixel blocks of the crop, regions in row-major order.
std::array<std::vector<Block8>, kRegionCount> extract_blocks(
    const Image& face, const RegionLayout& layout = {});

// Shifts and scales a block to zero mean and unit population variance.
// Blocks with standard deviation below 1e-8 (flat fill, e.g. out-of-frame
// background after alignment) map to all zeros.
template <class Derived>
Block8 normalize_block(const Eigen::MatrixBase<Derived>& block) {
  const Block8 b = block;
  const double mean = b.mean();
  const double var = (b.array() - mean).square().mean();
  const double sd = std::sqrt(var);
  if (sd < 1e-8) return Block8::Zero();
  return (b.array() - mean) / sd;
}

// The orthonormal 8x8 type-II transform matrix (row 0 scaled by sqrt(1/8),
// the rest by sqrt(2/8)).
const Block8& dct8_matrix();

// Orthonormal 2D type-II discrete cosine transform of an 8x8 block.
template <class Derived>
Block8 dct2(const Eigen::MatrixBase<Derived>& block) {
  const Block8& c = dct8_matrix();
  return c * block.derived() * c.transpose();
}

// The first kFeatureDim + 1 coefficients in JPEG zig-zag scan order with the
// DC (first) entry dropped.
Feature zigzag_features(const Block8& coeffs);

// Full descriptor pipeline for one face: per region, the normalized blocks'
// transform descriptors as columns (kFeatureDim x 16 per region).
std::array<FeatureMatrix, kRegionCount> face_features(
    const Image& face, const RegionLayout& layout = {});

}  // namespace mrh

#endif  // MRH_FEATURES_HPP_
