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

#include <doctest.h>

#include <vector>

#include "mrh/align.hpp"
#include "mrh/features.hpp"
#include "mrh/rng.hpp"
#include "test_util.hpp"

using namespace mrh;

namespace {

// Independent oracle: enumerate the block grid directly from the geometry
// rule (region origins at 0/21/42, sides 20/20/22, step 4) rather than
// through extract_blocks.
std::vector<int> oracle_starts(int region) {
  const int origin = 21 * region;
  const int side = region == 2 ? 64 - origin : 20;
  std::vector<int> starts;
  for (int off = 0; off + 8 <= side; off += 4) starts.push_back(origin + off);
  return starts;
}

// Independent zig-zag oracle: walk the anti-diagonals of an 8x8 grid the way
// the JPEG scan does and return the visit order.
std::vector<std::pair<int, int>> oracle_zigzag() {
  std::vector<std::pair<int, int>> order;
  int r = 0, c = 0;
  bool up = true;
  for (int i = 0; i < 64; ++i) {
    order.emplace_back(r, c);
    if (up) {
      if (c == 7) {
        ++r;
        up = false;
      } else if (r == 0) {
        ++c;
        up = false;
      } else {
        --r;
        ++c;
      }
    } else {
      if (r == 7) {
        ++c;
        up = true;
      } else if (c == 0) {
        ++r;
        up = true;
      } else {
        ++r;
        --c;
      }
    }
  }
  return order;
}

Image gradient_face() {
  Image face(kCropSize, kCropSize);
  for (int y = 0; y < kCropSize; ++y) {
    for (int x = 0; x < kCropSize; ++x) face(y, x) = x;
  }
  return face;
}

}  // namespace

TEST_CASE("block grid matches the enumerated geometry oracle") {
  int oracle_total = 0;
  for (int r = 0; r < 3; ++r) {
    const auto starts = block_starts_1d(r);
    const auto expect = oracle_starts(r);
    CHECK(starts == expect);
    CHECK(starts.size() == 4);
    for (int s : starts) CHECK(s + 8 <= 64);
  }
  for (int rr = 0; rr < 3; ++rr) {
    for (int rc = 0; rc < 3; ++rc) {
      oracle_total += static_cast<int>(oracle_starts(rr).size() *
                                       oracle_starts(rc).size());
    }
  }
  CHECK(oracle_total == 144);

  const Image face = Image::Constant(kCropSize, kCropSize, 128.0);
  const auto regions = extract_blocks(face);
  int total = 0;
  for (const auto& blocks : regions) {
    CHECK(blocks.size() == 16);
    total += static_cast<int>(blocks.size());
    for (const auto& b : blocks) {
      CHECK((b.array() == 128.0).all());
    }
  }
  CHECK(total == oracle_total);
}

TEST_CASE("first block of region 0 is the top-left face corner") {
  const Image face = gradient_face();
  const auto regions = extract_blocks(face);
  const Block8 expect = face.block<8, 8>(0, 0);
  CHECK((regions[0][0] - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("extract_blocks rejects wrong sizes") {
  CHECK_THROWS_AS(extract_blocks(Image::Zero(32, 64)), DataError);
}

TEST_CASE("normalize_block zero-mean unit-variance and degenerate rule") {
  Block8 half;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) half(i, j) = (j % 2 == 0) ? 0.0 : 2.0;
  }
  const Block8 normed = normalize_block(half);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      CHECK(normed(i, j) == doctest::Approx(j % 2 == 0 ? -1.0 : 1.0));
    }
  }

  CHECK((normalize_block(Block8::Constant(5.0)).array() == 0.0).all());

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Block8 b;
    for (int i = 0; i < 64; ++i) b(i / 8, i % 8) = 255.0 * rng.next_double();
    const Block8 n = normalize_block(b);
    CHECK(std::abs(n.mean()) < 1e-12);
    CHECK(std::abs(std::sqrt(n.array().square().mean()) - 1.0) < 1e-12);

    // Affine intensity invariance: normalize(a*B + b) = sign(a)*normalize(B).
    const double a = -3.7, c = 41.0;
    const Block8 affine = normalize_block((a * b.array() + c).matrix());
    CHECK((affine + n).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("dct2 basics: DC, inverse, Parseval, linearity") {
  const Block8 constant = Block8::Constant(3.25);
  const Block8 coeffs = dct2(constant);
  CHECK(coeffs(0, 0) == doctest::Approx(8.0 * 3.25));
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      if (i || j) CHECK(std::abs(coeffs(i, j)) < 1e-12);
    }
  }

  Rng rng(5);
  const Block8& c = dct8_matrix();
  for (int trial = 0; trial < 50; ++trial) {
    Block8 x, y;
    for (int i = 0; i < 64; ++i) {
      x(i / 8, i % 8) = rng.next_gaussian();
      y(i / 8, i % 8) = rng.next_gaussian();
    }
    const Block8 tx = dct2(x);
    // Orthonormality: C^T * (C X C^T) * C restores X.
    const Block8 back = c.transpose() * tx * c;
    CHECK((back - x).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(tx.squaredNorm() - x.squaredNorm()) < 1e-9);

    const Block8 lin = dct2((2.0 * x - 0.5 * y).eval());
    CHECK((lin - (2.0 * dct2(x) - 0.5 * dct2(y))).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("zig-zag scan takes the leading AC coefficients") {
  Block8 single = Block8::Zero();
  single(0, 1) = 1.0;
  const Feature f = zigzag_features(single);
  CHECK(f(0) == 1.0);
  CHECK(f.tail(kFeatureDim - 1).cwiseAbs().maxCoeff() == 0.0);

  CHECK(zigzag_features(Block8::Zero()).cwiseAbs().maxCoeff() == 0.0);

  // Number every cell by its zig-zag rank; the descriptor must read 1..15.
  const auto order = oracle_zigzag();
  Block8 ranked;
  for (int i = 0; i < 64; ++i) ranked(order[i].first, order[i].second) = i;
  const Feature ranks = zigzag_features(ranked);
  for (int i = 0; i < kFeatureDim; ++i) {
    CHECK(ranks(i) == doctest::Approx(i + 1));
  }
}

TEST_CASE("face descriptors: counts and photometric invariance") {
  Image face(kCropSize, kCropSize);
  Rng rng(9);
  for (int y = 0; y < kCropSize; ++y) {
    for (int x = 0; x < kCropSize; ++x) {
      face(y, x) = 100.0 + 60.0 * std::sin(0.2 * x) * std::cos(0.15 * y) +
                   10.0 * rng.next_double();
    }
  }
  const auto features = face_features(face);
  for (const auto& region : features) {
    CHECK(region.rows() == kFeatureDim);
    CHECK(region.cols() == 16);
    CHECK(region.allFinite());
  }

  // Global brightness/contrast change must not move the descriptors.
  const Image adjusted = (1.7 * face.array() + 25.0).matrix();
  const auto features2 = face_features(adjusted);
  for (int r = 0; r < kRegionCount; ++r) {
    CHECK((features[static_cast<std::size_t>(r)] -
           features2[static_cast<std::size_t>(r)])
              .cwiseAbs()
              .maxCoeff() < 1e-6);
  }
}
