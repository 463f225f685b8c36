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

#ifndef MRH_IMAGE_HPP_
#define MRH_IMAGE_HPP_

#include <string>

#include "mrh/types.hpp"

namespace mrh {

// Loads an 8-bit PGM (P5 or P2) or PNG image as grayscale. Color PNG input
// is converted with luma weights 0.299 R + 0.587 G + 0.114 B.
Image load_image(const std::string& path);

// Writes an 8-bit binary PGM; values are rounded and clamped to [0, 255].
void save_pgm(const std::string& path, const Image& image);

}  // namespace mrh

#endif  // MRH_IMAGE_HPP_
