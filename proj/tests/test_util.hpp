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

#ifndef MRH_TESTS_TEST_UTIL_HPP_
#define MRH_TESTS_TEST_UTIL_HPP_

#include <unistd.h>

#include <filesystem>
#include <string>

#include "mrh/rng.hpp"
#include "mrh/types.hpp"

namespace mrh_test {

// Random signature: each region row is a normalized random histogram.
inline mrh::Signature random_signature(mrh::Rng& rng, int components) {
  mrh::Signature s(mrh::kRegionCount, components);
  for (int r = 0; r < mrh::kRegionCount; ++r) {
    double sum = 0.0;
    for (int c = 0; c < components; ++c) {
      s(r, c) = rng.next_double() + 1e-6;
      sum += s(r, c);
    }
    s.row(r) /= sum;
  }
  return s;
}

// Smooth band-limited brightness pattern used by the alignment tests;
// low frequencies keep bilinear resampling error far below a gray level.
inline double analytic_pattern(double x, double y) {
  return 128.0 + 55.0 * std::sin(0.11 * x + 0.3) * std::cos(0.07 * y - 0.2) +
         35.0 * std::sin(0.05 * (x + y));
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("mrh_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& name = "") const {
    return name.empty() ? path_.string() : (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

}  // namespace mrh_test

#endif  // MRH_TESTS_TEST_UTIL_HPP_
