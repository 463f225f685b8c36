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

#include <cmath>
#include <vector>

#include "mrh/matching.hpp"
#include "mrh/rng.hpp"
#include "test_util.hpp"

using namespace mrh;
using mrh_test::random_signature;

namespace {

// Signature that is uniform everywhere except one region histogram.
Signature with_region0(std::initializer_list<double> histogram) {
  const int g = static_cast<int>(histogram.size());
  Signature s = Signature::Constant(kRegionCount, g, 1.0 / g);
  int c = 0;
  for (double v : histogram) s(0, c++) = v;
  return s;
}

}  // namespace

TEST_CASE("raw distance: identity, hand sum, metric axioms") {
  Rng rng(61);
  const Signature x = random_signature(rng, 8);
  CHECK(d_raw(x, x) == 0.0);

  // Only region 0 differs: |1-0| + |0-1| = 2.
  const Signature a = with_region0({1.0, 0.0});
  const Signature b = with_region0({0.0, 1.0});
  CHECK(d_raw(a, b) == 2.0);

  for (int trial = 0; trial < 100; ++trial) {
    const Signature p = random_signature(rng, 8);
    const Signature q = random_signature(rng, 8);
    const Signature r = random_signature(rng, 8);
    CHECK(d_raw(p, q) == d_raw(q, p));
    CHECK(d_raw(p, q) >= 0.0);
    CHECK(d_raw(p, r) <= d_raw(p, q) + d_raw(q, r));
  }

  CHECK_THROWS_AS(d_raw(random_signature(rng, 8), random_signature(rng, 4)),
                  DataError);
}

TEST_CASE("normalized distance: zero, hand case, cohort duplication") {
  Rng rng(62);
  const Signature x = random_signature(rng, 6);
  const Signature y = random_signature(rng, 6);
  CohortSet cohorts;
  for (int i = 0; i < 5; ++i) cohorts.cohorts.push_back(random_signature(rng, 6));

  CHECK(d_norm(x, x, cohorts) == 0.0);
  CHECK(d_norm(x, y, cohorts) == d_norm(y, x, cohorts));

  // Equilateral triple in region 0: every pairwise raw distance is 2, so the
  // normalized distance is 2 / ((2 + 2) / 2) = 1.
  const Signature ex = with_region0({1.0, 0.0, 0.0});
  const Signature ey = with_region0({0.0, 1.0, 0.0});
  CohortSet ec;
  ec.cohorts.push_back(with_region0({0.0, 0.0, 1.0}));
  CHECK(d_norm(ex, ey, ec) == doctest::Approx(1.0).epsilon(1e-12));

  // Duplicating the cohort list leaves the mean denominator unchanged.
  CohortSet doubled = cohorts;
  doubled.cohorts.insert(doubled.cohorts.end(), cohorts.cohorts.begin(),
                         cohorts.cohorts.end());
  CHECK(std::abs(d_norm(x, y, cohorts) - d_norm(x, y, doubled)) < 1e-12);

  // Degenerate: X, Y, and all cohorts identical.
  CohortSet same;
  same.cohorts.push_back(x);
  CHECK_THROWS_AS(d_norm(x, x, same), DataError);
}

TEST_CASE("normalized distance is invariant to common positive scaling") {
  Rng rng(63);
  const Signature x = random_signature(rng, 6);
  const Signature y = random_signature(rng, 6);
  CohortSet cohorts;
  for (int i = 0; i < 4; ++i) cohorts.cohorts.push_back(random_signature(rng, 6));

  const double base = d_norm(x, y, cohorts);
  const double c = 3.7;
  CohortSet scaled_cohorts;
  for (const auto& s : cohorts.cohorts) scaled_cohorts.cohorts.push_back(c * s);
  const Signature sx = c * x;
  const Signature sy = c * y;
  CHECK(std::abs(d_norm(sx, sy, scaled_cohorts) - base) < 1e-12);
}

TEST_CASE("set distance equals the exhaustive pair minimum") {
  Rng rng(64);
  CohortSet cohorts;
  for (int i = 0; i < 4; ++i) cohorts.cohorts.push_back(random_signature(rng, 5));

  std::vector<Signature> probe = {random_signature(rng, 5)};
  std::vector<Signature> gallery = {random_signature(rng, 5)};
  CHECK(set_distance(probe, gallery, cohorts) ==
        d_norm(probe[0], gallery[0], cohorts));

  // A gallery copy of the probe signature forces distance 0.
  gallery.push_back(probe[0]);
  CHECK(set_distance(probe, gallery, cohorts) == 0.0);

  std::vector<Signature> probes3, gallery4;
  for (int i = 0; i < 3; ++i) probes3.push_back(random_signature(rng, 5));
  for (int i = 0; i < 4; ++i) gallery4.push_back(random_signature(rng, 5));
  double brute = std::numeric_limits<double>::infinity();
  for (const auto& p : probes3) {
    for (const auto& g : gallery4) {
      brute = std::min(brute, d_norm(p, g, cohorts));
    }
  }
  CHECK(set_distance(probes3, gallery4, cohorts) == brute);

  // Monotone: growing the gallery can only lower the minimum.
  const double before = set_distance(probes3, gallery4, cohorts);
  gallery4.push_back(random_signature(rng, 5));
  CHECK(set_distance(probes3, gallery4, cohorts) <= before);

  CHECK_THROWS_AS(set_distance({}, gallery4, cohorts), DataError);
}

TEST_CASE("threshold decision accepts ties") {
  CHECK(decide(0.5, 0.5).matched);
  CHECK_FALSE(decide(0.500001, 0.5).matched);
  CHECK(decide(0.0, 0.0).matched);
  CHECK(decide(0.0, 12.0).matched);
  CHECK_THROWS_AS(decide(std::nan(""), 0.5), DataError);
}
