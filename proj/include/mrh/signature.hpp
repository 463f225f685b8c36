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

#ifndef MRH_SIGNATURE_HPP_
#define MRH_SIGNATURE_HPP_

#include <string>
#include <vector>

#include "mrh/dictionary.hpp"
#include "mrh/features.hpp"
#include "mrh/types.hpp"

namespace mrh {

// The face signature: per region, the average of the component posteriors of
// that region's block descriptors. Averaging normalized histograms keeps
// each region row summing to 1.
Signature compute_mrh(const Image& face, const VisualDictionary& dict,
                      const RegionLayout& layout = {});

// Elementwise arithmetic mean of the given signatures. Uses compensated
// summation so the result is stable under permutation of the inputs.
Signature average_signatures(const std::vector<Signature>& signatures);

// Same, over an index subset of a signature list (used by clustering).
Signature average_signatures(const std::vector<Signature>& signatures,
                             const std::vector<int>& indices);

// Signature file: magic "MRH1"; little-endian u32 components, region count,
// signature count; then per signature all regions' histograms as 64-bit
// little-endian floats, regions in row-major order. Round-trips bit-exactly.
void save_signatures(const std::string& path,
                     const std::vector<Signature>& signatures);
std::vector<Signature> load_signatures(const std::string& path);

}  // namespace mrh

#endif  // MRH_SIGNATURE_HPP_
