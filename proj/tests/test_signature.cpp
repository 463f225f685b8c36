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

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "mrh/align.hpp"
#include "mrh/signature.hpp"
#include "test_util.hpp"

using namespace mrh;

namespace {

// ---- Scalar reference path, independent of the Eigen implementation. ----

// One 8x8 block of the stripe face below, starting at x-phase `phase`.
std::array<double, 64> stripe_block(const std::array<double, 8>& stripe,
                                    int phase) {
  std::array<double, 64> block{};
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      block[y * 8 + x] = stripe[(phase + x) % 8];
    }
  }
  return block;
}

std::array<double, 64> scalar_normalize(std::array<double, 64> block) {
  double mean = 0.0;
  for (double v : block) mean += v;
  mean /= 64.0;
  double var = 0.0;
  for (double v : block) var += (v - mean) * (v - mean);
  var /= 64.0;
  const double sd = std::sqrt(var);
  if (sd < 1e-8) return {};
  for (double& v : block) v = (v - mean) / sd;
  return block;
}

// Plain quadruple-loop transform straight from the cosine definition.
std::array<double, 64> scalar_dct(const std::array<double, 64>& block) {
  const double pi = 3.14159265358979323846264338327950288;
  std::array<double, 64> out{};
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 8; ++v) {
      double sum = 0.0;
      for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
          sum += block[y * 8 + x] * std::cos(pi * (2 * y + 1) * u / 16.0) *
                 std::cos(pi * (2 * x + 1) * v / 16.0);
        }
      }
      const double su = u == 0 ? std::sqrt(1.0 / 8.0) : 0.5;
      const double sv = v == 0 ? std::sqrt(1.0 / 8.0) : 0.5;
      out[u * 8 + v] = su * sv * sum;
    }
  }
  return out;
}

std::vector<double> scalar_descriptor(const std::array<double, 8>& stripe,
                                      int phase) {
  const auto coeffs = scalar_dct(scalar_normalize(stripe_block(stripe, phase)));
  // Zig-zag walk over the anti-diagonals, skipping the DC entry.
  std::vector<double> f;
  int r = 0, c = 0;
  bool up = true;
  for (int i = 0; i < 16; ++i) {
    if (i > 0) f.push_back(coeffs[r * 8 + c]);
    if (up) {
      if (c == 7) { ++r; up = false; }
      else if (r == 0) { ++c; up = false; }
      else { --r; ++c; }
    } else {
      if (r == 7) { ++c; up = true; }
      else if (c == 0) { ++r; up = true; }
      else { ++r; --c; }
    }
  }
  return f;
}

std::vector<double> scalar_posterior(const std::vector<double>& f,
                                     const std::vector<std::vector<double>>& mu,
                                     const std::vector<double>& w) {
  std::vector<double> joint(w.size());
  double total = 0.0;
  for (std::size_t g = 0; g < w.size(); ++g) {
    double exponent = 0.0;
    for (std::size_t d = 0; d < f.size(); ++d) {
      exponent += (f[d] - mu[g][d]) * (f[d] - mu[g][d]);
    }
    // Unit variances: density = (2 pi)^(-D/2) exp(-exponent/2); the shared
    // normalizer cancels in the posterior.
    joint[g] = w[g] * std::exp(-0.5 * exponent);
    total += joint[g];
  }
  for (double& v : joint) v /= total;
  return joint;
}

}  // namespace

TEST_CASE("single-component dictionary forces unit histograms") {
  VisualDictionary dict(Vector::Ones(1), Matrix::Zero(kFeatureDim, 1),
                        Matrix::Ones(kFeatureDim, 1));
  Image face(kCropSize, kCropSize);
  Rng rng(31);
  for (int y = 0; y < kCropSize; ++y) {
    for (int x = 0; x < kCropSize; ++x) face(y, x) = 255.0 * rng.next_double();
  }
  const Signature sig = compute_mrh(face, dict);
  REQUIRE(sig.cols() == 1);
  for (int r = 0; r < kRegionCount; ++r) CHECK(sig(r, 0) == 1.0);
}

TEST_CASE("constant face gives identical region histograms") {
  Rng rng(32);
  Matrix mu(kFeatureDim, 3), var(kFeatureDim, 3);
  Vector w(3);
  for (int g = 0; g < 3; ++g) {
    w(g) = 1.0 / 3.0;
    for (int d = 0; d < kFeatureDim; ++d) {
      mu(d, g) = rng.next_gaussian();
      var(d, g) = 0.5 + rng.next_double();
    }
  }
  VisualDictionary dict(w, mu, var);
  const Signature sig = compute_mrh(Image::Constant(kCropSize, kCropSize, 77.0),
                                    dict);
  for (int r = 1; r < kRegionCount; ++r) {
    CHECK((sig.row(r) - sig.row(0)).cwiseAbs().maxCoeff() == 0.0);
  }
  for (int r = 0; r < kRegionCount; ++r) {
    CHECK(std::abs(sig.row(r).sum() - 1.0) < 1e-9);
  }
}

TEST_CASE("region averages match a hand-computed posterior mixture") {
  // Stripe face with x-period 8: within each region column the 16 blocks
  // alternate between exactly two phase patterns (8 of each), so each region
  // histogram must equal the midpoint of the two block posteriors.
  const std::array<double, 8> stripe = {10, 50, 30, 200, 90, 140, 70, 160};
  Image face(kCropSize, kCropSize);
  for (int y = 0; y < kCropSize; ++y) {
    for (int x = 0; x < kCropSize; ++x) face(y, x) = stripe[x % 8];
  }

  // Dictionary components sit on the phase-0 and phase-4 descriptors.
  const std::vector<double> f0 = scalar_descriptor(stripe, 0);
  const std::vector<double> f4 = scalar_descriptor(stripe, 4);
  Matrix mu(kFeatureDim, 2);
  for (int d = 0; d < kFeatureDim; ++d) {
    mu(d, 0) = f0[static_cast<std::size_t>(d)];
    mu(d, 1) = f4[static_cast<std::size_t>(d)];
  }
  Vector w(2);
  w << 0.6, 0.4;
  VisualDictionary dict(w, mu, Matrix::Ones(kFeatureDim, 2));

  const Signature sig = compute_mrh(face, dict);

  const std::vector<std::vector<double>> centers = {f0, f4};
  const std::vector<double> weights = {0.6, 0.4};
  // Block x-starts per region column begin at 0, 21, 42: phases {0,4},
  // {5,1}, {2,6}.
  const int phases[3][2] = {{0, 4}, {5, 1}, {2, 6}};
  for (int rc = 0; rc < 3; ++rc) {
    const auto pa =
        scalar_posterior(scalar_descriptor(stripe, phases[rc][0]), centers,
                         weights);
    const auto pb =
        scalar_posterior(scalar_descriptor(stripe, phases[rc][1]), centers,
                         weights);
    for (int rr = 0; rr < 3; ++rr) {
      const int region = rr * 3 + rc;
      for (int g = 0; g < 2; ++g) {
        const double expect =
            0.5 * (pa[static_cast<std::size_t>(g)] +
                   pb[static_cast<std::size_t>(g)]);
        CHECK(std::abs(sig(region, g) - expect) < 1e-9);
      }
    }
  }
}

TEST_CASE("signature averaging: identities and permutation stability") {
  Rng rng(33);
  const Signature x = mrh_test::random_signature(rng, 6);

  const Signature one = average_signatures({x});
  CHECK((one - x).cwiseAbs().maxCoeff() == 0.0);

  const Signature two = average_signatures({x, x});
  CHECK((two - x).cwiseAbs().maxCoeff() < 1e-15);

  Signature a = Signature::Zero(kRegionCount, 2);
  Signature b = Signature::Zero(kRegionCount, 2);
  a.col(0).setOnes();
  b.col(1).setOnes();
  const Signature mid = average_signatures({a, b});
  CHECK((mid.array() == 0.5).all());

  std::vector<Signature> many;
  for (int i = 0; i < 40; ++i) {
    many.push_back(mrh_test::random_signature(rng, 6));
  }
  const Signature forward = average_signatures(many);
  std::vector<Signature> shuffled = many;
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1],
              shuffled[static_cast<std::size_t>(rng.next_below(i))]);
  }
  const Signature reversed = average_signatures(shuffled);
  CHECK((forward - reversed).cwiseAbs().maxCoeff() < 1e-12);
  for (int r = 0; r < kRegionCount; ++r) {
    CHECK(std::abs(forward.row(r).sum() - 1.0) < 1e-9);
  }

  CHECK_THROWS_AS(average_signatures({}), DataError);
  CHECK_THROWS_AS(
      average_signatures({mrh_test::random_signature(rng, 6),
                          mrh_test::random_signature(rng, 3)}),
      DataError);
}

TEST_CASE("signatures are invariant to brightness and contrast changes") {
  Rng rng(34);
  Matrix mu(kFeatureDim, 4), var(kFeatureDim, 4);
  Vector w = Vector::Constant(4, 0.25);
  for (int g = 0; g < 4; ++g) {
    for (int d = 0; d < kFeatureDim; ++d) {
      mu(d, g) = rng.next_gaussian();
      var(d, g) = 0.5 + rng.next_double();
    }
  }
  VisualDictionary dict(w, mu, var);

  Image face(kCropSize, kCropSize);
  for (int y = 0; y < kCropSize; ++y) {
    for (int x = 0; x < kCropSize; ++x) {
      face(y, x) = 100.0 + 50.0 * std::sin(0.13 * x) * std::cos(0.21 * y);
    }
  }
  const Signature base = compute_mrh(face, dict);
  const Image adjusted = (0.6 * face.array() + 30.0).matrix();
  const Signature moved = compute_mrh(adjusted, dict);
  CHECK((base - moved).cwiseAbs().maxCoeff() < 1e-6);
}
