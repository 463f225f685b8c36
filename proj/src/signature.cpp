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

#include "mrh/signature.hpp"

#include <fstream>
#include <numeric>

#include "binary_io.hpp"

namespace mrh {

Signature compute_mrh(const Image& face, const VisualDictionary& dict,
                      const RegionLayout& layout) {
  if (dict.dim() != kFeatureDim) {
    throw DataError("dictionary dimension does not match block descriptors");
  }
  const auto regions = face_features(face, layout);
  Signature sig(kRegionCount, dict.components());
  for (int r = 0; r < kRegionCount; ++r) {
    const Matrix posts = dict.posteriors(regions[static_cast<std::size_t>(r)]);
    // Explicit fixed-order accumulation: identical inputs give bit-identical
    // rows regardless of row alignment in the signature matrix.
    for (Eigen::Index g = 0; g < posts.rows(); ++g) {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < posts.cols(); ++i) sum += posts(g, i);
      sig(r, g) = sum / static_cast<double>(posts.cols());
    }
  }
  return sig;
}

namespace {

Signature kahan_average(const std::vector<Signature>& signatures,
                        const std::vector<int>* indices) {
  const std::size_t count =
      indices ? indices->size() : signatures.size();
  if (count == 0) throw DataError("cannot average an empty signature list");
  auto at = [&](std::size_t i) -> const Signature& {
    return indices ? signatures[static_cast<std::size_t>((*indices)[i])]
                   : signatures[i];
  };
  const Eigen::Index g = at(0).cols();
  Signature sum = Signature::Zero(kRegionCount, g);
  Signature comp = Signature::Zero(kRegionCount, g);
  for (std::size_t i = 0; i < count; ++i) {
    const Signature& s = at(i);
    if (s.cols() != g) {
      throw DataError("mixed component counts in signature average");
    }
    // Kahan update, elementwise.
    Signature y = s - comp;
    Signature t = sum + y;
    comp = (t - sum) - y;
    sum = std::move(t);
  }
  return sum / static_cast<double>(count);
}

}  // namespace

Signature average_signatures(const std::vector<Signature>& signatures) {
  return kahan_average(signatures, nullptr);
}

Signature average_signatures(const std::vector<Signature>& signatures,
                             const std::vector<int>& indices) {
  return kahan_average(signatures, &indices);
}

void save_signatures(const std::string& path,
                     const std::vector<Signature>& signatures) {
  Eigen::Index g = 0;
  if (!signatures.empty()) {
    g = signatures.front().cols();
    for (const auto& s : signatures) {
      if (s.cols() != g) {
        throw DataError("mixed component counts in one signature file");
      }
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write signatures: " + path);
  out.write("MRH1", 4);
  detail::write_u32_le(out, static_cast<std::uint32_t>(g));
  detail::write_u32_le(out, static_cast<std::uint32_t>(kRegionCount));
  detail::write_u32_le(out, static_cast<std::uint32_t>(signatures.size()));
  for (const auto& s : signatures) {
    for (int r = 0; r < kRegionCount; ++r) {
      for (Eigen::Index c = 0; c < g; ++c) {
        detail::write_f64_le(out, s(r, c));
      }
    }
  }
  if (!out) throw DataError("I/O failure writing " + path);
}

std::vector<Signature> load_signatures(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open signatures: " + path);
  detail::expect_magic(in, "MRH1", path);
  const auto g = detail::read_u32_le(in, path);
  const auto regions = detail::read_u32_le(in, path);
  const auto count = detail::read_u32_le(in, path);
  if (regions != kRegionCount) {
    throw DataError("unexpected region count in " + path);
  }
  if (count > 0 && g == 0) {
    throw DataError("zero-component signatures in " + path);
  }
  std::vector<Signature> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Signature s(kRegionCount, g);
    for (int r = 0; r < kRegionCount; ++r) {
      for (std::uint32_t c = 0; c < g; ++c) {
        s(r, static_cast<Eigen::Index>(c)) = detail::read_f64_le(in, path);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace mrh
