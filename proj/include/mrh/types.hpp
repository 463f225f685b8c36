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

#ifndef MRH_TYPES_HPP_
#define MRH_TYPES_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mrh {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Grayscale image, intensities in [0, 255]. Row-major so that scanline IO
// can touch memory directly; (row, col) indexing as usual.
using Image =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One 8x8 pixel block and its transform coefficients.
using Block8 = Eigen::Matrix<double, 8, 8>;

// Face signature: one probability histogram per region, regions as rows in
// row-major 3x3 order, one column per dictionary component. Row-major storage
// keeps a signature contiguous region-by-region for serialization.
inline constexpr int kRegionCount = 9;
using Signature =
    Eigen::Matrix<double, kRegionCount, Eigen::Dynamic, Eigen::RowMajor>;

// Block descriptor dimensionality: the leading zig-zag transform
// coefficients with the DC term dropped.
inline constexpr int kFeatureDim = 15;
using Feature = Eigen::Matrix<double, kFeatureDim, 1>;
using FeatureMatrix = Eigen::Matrix<double, kFeatureDim, Eigen::Dynamic>;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
};

// Errors caused by bad input data (malformed files, violated invariants,
// degenerate comparisons). The CLI maps these to a distinct exit code.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mrh

#endif  // MRH_TYPES_HPP_
