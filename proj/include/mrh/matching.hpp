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

#ifndef MRH_MATCHING_HPP_
#define MRH_MATCHING_HPP_

#include <vector>

#include "mrh/types.hpp"

namespace mrh {

// L1 distance between two signatures, summed over every region histogram
// entry.
inline double d_raw(const Signature& x, const Signature& y) {
  if (x.cols() != y.cols()) {
    throw DataError("signature component counts differ");
  }
  return (x - y).cwiseAbs().sum();
}

// Fixed set of non-matching reference signatures used to normalize raw
// distances; drawn from training-role videos.
struct CohortSet {
  std::vector<Signature> cohorts;
};

// Raw distance divided by the mean distance of both signatures to the
// cohort set. A zero denominator (both signatures identical to every
// cohort) signals corrupt data and errors out rather than comparing 0/0.
double d_norm(const Signature& x, const Signature& y, const CohortSet& cohorts);

// Minimum normalized distance over all probe-gallery signature pairs.
double set_distance(const std::vector<Signature>& probe_sigs,
                    const std::vector<Signature>& gallery_sigs,
                    const CohortSet& cohorts);

struct MatchDecision {
  double distance = 0.0;
  double threshold = 0.0;
  bool matched = false;  // distance <= threshold; ties accept
};

MatchDecision decide(double distance, double threshold);

}  // namespace mrh

#endif  // MRH_MATCHING_HPP_
