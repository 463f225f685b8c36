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

#include "mrh/matching.hpp"

#include <cmath>
#include <limits>

namespace mrh {

double d_norm(const Signature& x, const Signature& y,
              const CohortSet& cohorts) {
  if (cohorts.cohorts.empty()) throw DataError("cohort set is empty");
  double sum = 0.0;
  for (const auto& c : cohorts.cohorts) {
    sum += d_raw(x, c) + d_raw(y, c);
  }
  const double denom =
      sum / (2.0 * static_cast<double>(cohorts.cohorts.size()));
  if (denom <= 0.0) {
    throw DataError(
        "degenerate comparison: both signatures coincide with every cohort");
  }
  return d_raw(x, y) / denom;
}

double set_distance(const std::vector<Signature>& probe_sigs,
                    const std::vector<Signature>& gallery_sigs,
                    const CohortSet& cohorts) {
  if (probe_sigs.empty() || gallery_sigs.empty()) {
    throw DataError("set distance requires non-empty signature sets");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : probe_sigs) {
    for (const auto& g : gallery_sigs) {
      best = std::min(best, d_norm(p, g, cohorts));
    }
  }
  return best;
}

MatchDecision decide(double distance, double threshold) {
  if (std::isnan(distance) || std::isnan(threshold)) {
    throw DataError("NaN passed to match decision");
  }
  return MatchDecision{distance, threshold, distance <= threshold};
}

}  // namespace mrh
