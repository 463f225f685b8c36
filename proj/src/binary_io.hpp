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

// Little-endian scalar IO shared by the signature and dictionary file
// formats. Internal to src/.

#ifndef MRH_SRC_BINARY_IO_HPP_
#define MRH_SRC_BINARY_IO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "mrh/types.hpp"

namespace mrh::detail {

static_assert(sizeof(double) == 8 && std::numeric_limits<double>::is_iec559,
              "IEEE-754 binary64 required");

inline void write_u32_le(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t read_u32_le(std::istream& in, const std::string& path) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() != 4) throw DataError("truncated file: " + path);
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void write_f64_le(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap64(bits);
  }
  out.write(reinterpret_cast<const char*>(&bits), 8);
}

inline double read_f64_le(std::istream& in, const std::string& path) {
  std::uint64_t bits;
  in.read(reinterpret_cast<char*>(&bits), 8);
  if (in.gcount() != 8) throw DataError("truncated file: " + path);
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap64(bits);
  }
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

inline void expect_magic(std::istream& in, const char (&magic)[5],
                         const std::string& path) {
  char got[4];
  in.read(got, 4);
  if (in.gcount() != 4 || std::memcmp(got, magic, 4) != 0) {
    throw DataError("bad magic in " + path + " (expected " +
                    std::string(magic, 4) + ")");
  }
}

}  // namespace mrh::detail

#endif  // MRH_SRC_BINARY_IO_HPP_
