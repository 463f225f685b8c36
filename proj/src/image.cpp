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

#include "mrh/image.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include <png.h>

namespace mrh {

namespace {

// Skips PGM whitespace and '#' comment lines, then reads one unsigned int.
int read_pnm_int(std::istream& in, const std::string& path) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  if (c == EOF || !std::isdigit(c)) {
    throw DataError("malformed PGM header in " + path);
  }
  int value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    c = in.get();
  }
  return value;
}

Image load_pgm(std::ifstream& in, const std::string& path, bool binary) {
  const int width = read_pnm_int(in, path);
  const int height = read_pnm_int(in, path);
  const int maxval = read_pnm_int(in, path);
  if (width <= 0 || height <= 0) {
    throw DataError("bad PGM dimensions in " + path);
  }
  if (maxval <= 0 || maxval > 255) {
    throw DataError("only 8-bit PGM supported: " + path);
  }
  Image img(height, width);
  if (binary) {
    std::vector<unsigned char> row(static_cast<std::size_t>(width));
    for (int y = 0; y < height; ++y) {
      in.read(reinterpret_cast<char*>(row.data()), width);
      if (in.gcount() != width) {
        throw DataError("truncated PGM data in " + path);
      }
      for (int x = 0; x < width; ++x) img(y, x) = static_cast<double>(row[x]);
    }
  } else {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        img(y, x) = static_cast<double>(read_pnm_int(in, path));
      }
    }
  }
  return img;
}

struct PngReadCloser {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* file = nullptr;
  ~PngReadCloser() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (file) std::fclose(file);
  }
};

Image load_png(const std::string& path) {
  PngReadCloser ctx;
  ctx.file = std::fopen(path.c_str(), "rb");
  if (!ctx.file) throw DataError("cannot open image: " + path);
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw DataError("libpng init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw DataError("libpng init failed");
  if (setjmp(png_jmpbuf(ctx.png))) {
    throw DataError("failed to decode PNG: " + path);
  }
  png_init_io(ctx.png, ctx.file);
  png_read_info(ctx.png, ctx.info);

  // Normalize everything to 8-bit RGB or gray.
  png_set_strip_16(ctx.png);
  png_set_strip_alpha(ctx.png);
  png_set_palette_to_rgb(ctx.png);
  png_set_expand_gray_1_2_4_to_8(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  const png_uint_32 width = png_get_image_width(ctx.png, ctx.info);
  const png_uint_32 height = png_get_image_height(ctx.png, ctx.info);
  const png_byte channels = png_get_channels(ctx.png, ctx.info);
  if (channels != 1 && channels != 3) {
    throw DataError("unsupported PNG channel layout in " + path);
  }
  std::vector<png_byte> row(static_cast<std::size_t>(width) * channels);
  Image img(static_cast<int>(height), static_cast<int>(width));
  for (png_uint_32 y = 0; y < height; ++y) {
    png_read_row(ctx.png, row.data(), nullptr);
    for (png_uint_32 x = 0; x < width; ++x) {
      double v;
      if (channels == 1) {
        v = static_cast<double>(row[x]);
      } else {
        const double r = row[3 * x + 0];
        const double g = row[3 * x + 1];
        const double b = row[3 * x + 2];
        v = 0.299 * r + 0.587 * g + 0.114 * b;
      }
      img(static_cast<int>(y), static_cast<int>(x)) = v;
    }
  }
  return img;
}

}  // namespace

Image load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open image: " + path);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (in.gcount() != 2) throw DataError("cannot read image header: " + path);
  if (magic[0] == 'P' && magic[1] == '5') return load_pgm(in, path, true);
  if (magic[0] == 'P' && magic[1] == '2') return load_pgm(in, path, false);
  if (magic[0] == '\x89' && magic[1] == 'P') {
    in.close();
    return load_png(path);
  }
  throw DataError("unrecognized image format: " + path);
}

void save_pgm(const std::string& path, const Image& image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write image: " + path);
  out << "P5\n" << image.cols() << " " << image.rows() << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(image.cols()));
  for (Eigen::Index y = 0; y < image.rows(); ++y) {
    for (Eigen::Index x = 0; x < image.cols(); ++x) {
      const double v = std::nearbyint(image(y, x));
      row[static_cast<std::size_t>(x)] =
          static_cast<unsigned char>(std::min(255.0, std::max(0.0, v)));
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw DataError("I/O failure writing " + path);
}

}  // namespace mrh
