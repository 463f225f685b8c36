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

#include <fstream>

#include <png.h>

#include "mrh/align.hpp"
#include "mrh/image.hpp"
#include "mrh/manifest.hpp"
#include "mrh/signature.hpp"
#include "test_util.hpp"

using namespace mrh;
using mrh_test::TempDir;

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
}

const char* kSmallManifest = R"({
  "persons": [
    {"person_id": "alice", "videos": [
      {"video_id": "v1", "role": "enroll", "frames": [
        {"frame": 2, "image": "a2.pgm", "box": [0, 0, 10, 10], "eyes": null, "confidence": 0.5},
        {"frame": 0, "image": "a0.pgm", "box": [0, 0, 10, 10], "eyes": [[3, 4], [7, 4]], "confidence": 0.9},
        {"frame": 1, "image": "a1.pgm", "box": [0, 0, 10, 10], "eyes": null, "confidence": 0.7}
      ]}
    ]}
  ]
})";

}  // namespace

TEST_CASE("manifest loads, sorts frames, and counts faces") {
  TempDir dir("manifest");
  write_file(dir.str("m.json"), kSmallManifest);
  const auto manifest = load_manifest(dir.str("m.json"));
  REQUIRE(manifest.persons.size() == 1);
  const auto& video = manifest.persons[0].videos[0];
  CHECK(video.frames.size() == 3);
  CHECK(video.frames[0].frame_index == 0);
  CHECK(video.frames[1].frame_index == 1);
  CHECK(video.frames[2].frame_index == 2);
  CHECK(video.frames[0].eyes.has_value());
  CHECK_FALSE(video.frames[1].eyes.has_value());
}

TEST_CASE("manifest duplicate and empty-video errors") {
  TempDir dir("manifest_err");
  write_file(dir.str("dup_video.json"), R"({"persons": [
    {"person_id": "a", "videos": [
      {"video_id": "v", "role": "probe", "frames": [
        {"frame": 0, "image": "x.pgm", "box": [0,0,1,1], "eyes": null, "confidence": 1}]},
      {"video_id": "v", "role": "probe", "frames": [
        {"frame": 0, "image": "y.pgm", "box": [0,0,1,1], "eyes": null, "confidence": 1}]}
    ]}]})");
  CHECK_THROWS_AS(load_manifest(dir.str("dup_video.json")), DataError);

  write_file(dir.str("dup_person.json"), R"({"persons": [
    {"person_id": "a", "videos": []}, {"person_id": "a", "videos": []}]})");
  CHECK_THROWS_AS(load_manifest(dir.str("dup_person.json")), DataError);

  write_file(dir.str("empty_video.json"), R"({"persons": [
    {"person_id": "a", "videos": [{"video_id": "v", "role": "train", "frames": []}]}]})");
  CHECK_THROWS_AS(load_manifest(dir.str("empty_video.json")), DataError);

  write_file(dir.str("bad.json"), "{ not json");
  CHECK_THROWS_AS(load_manifest(dir.str("bad.json")), DataError);

  write_file(dir.str("dup_frame.json"), R"({"persons": [
    {"person_id": "a", "videos": [{"video_id": "v", "role": "probe", "frames": [
      {"frame": 1, "image": "x.pgm", "box": [0,0,1,1], "eyes": null, "confidence": 1},
      {"frame": 1, "image": "y.pgm", "box": [0,0,1,1], "eyes": null, "confidence": 1}
    ]}]}]})");
  CHECK_THROWS_AS(load_manifest(dir.str("dup_frame.json")), DataError);
}

TEST_CASE("manifest load-save-load is a fixed point") {
  TempDir dir("manifest_rt");
  write_file(dir.str("m.json"), kSmallManifest);
  const auto first = load_manifest(dir.str("m.json"));
  save_manifest(dir.str("rt.json"), first);
  const auto second = load_manifest(dir.str("rt.json"));
  save_manifest(dir.str("rt2.json"), second);

  std::ifstream a(dir.str("rt.json")), b(dir.str("rt2.json"));
  std::string sa((std::istreambuf_iterator<char>(a)), {});
  std::string sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);
  REQUIRE(second.persons.size() == first.persons.size());
  CHECK(second.persons[0].videos[0].frames[1].confidence == 0.7);
}

TEST_CASE("approximate_eyes formula and degenerate box") {
  const auto [l1, r1] = approximate_eyes(Rect{0, 0, 100, 100});
  CHECK(l1.x == doctest::Approx(30.0));
  CHECK(l1.y == doctest::Approx(38.0));
  CHECK(r1.x == doctest::Approx(70.0));
  CHECK(r1.y == doctest::Approx(38.0));

  const auto [l2, r2] = approximate_eyes(Rect{10, 20, 50, 60});
  CHECK(l2.x == doctest::Approx(25.0));
  CHECK(l2.y == doctest::Approx(42.8));
  CHECK(r2.x == doctest::Approx(45.0));
  CHECK(r2.y == doctest::Approx(42.8));

  CHECK_THROWS_AS(approximate_eyes(Rect{0, 0, 0, 10}), DataError);
}

TEST_CASE("align_crop is the identity on an already-canonical crop") {
  Image img(kCropSize, kCropSize);
  for (int y = 0; y < kCropSize; ++y) {
    for (int x = 0; x < kCropSize; ++x) {
      img(y, x) = mrh_test::analytic_pattern(x, y);
    }
  }
  const Image out = align_crop(img, kCanonicalLeftEye, kCanonicalRightEye);
  CHECK((out - img).cwiseAbs().maxCoeff() < 1e-6);

  // Idempotence: realigning the output changes nothing either.
  const Image again = align_crop(out, kCanonicalLeftEye, kCanonicalRightEye);
  CHECK((again - out).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("align_crop is invariant to uniform scaling of image and eyes") {
  // Oracle: render the same analytic pattern at both scales; the 2x case
  // samples lattice points exactly, the 1.37x case goes through real
  // interpolation.
  Image small(kCropSize, kCropSize);
  for (int y = 0; y < kCropSize; ++y) {
    for (int x = 0; x < kCropSize; ++x) {
      small(y, x) = mrh_test::analytic_pattern(x, y);
    }
  }
  Image big(2 * kCropSize, 2 * kCropSize);
  for (int y = 0; y < 2 * kCropSize; ++y) {
    for (int x = 0; x < 2 * kCropSize; ++x) {
      big(y, x) = mrh_test::analytic_pattern(x / 2.0, y / 2.0);
    }
  }
  const Image out = align_crop(big, Point{32, 48}, Point{96, 48});
  CHECK((out - small).cwiseAbs().mean() < 0.5);

  const double s = 1.37;
  Image odd(static_cast<int>(kCropSize * s) + 2,
            static_cast<int>(kCropSize * s) + 2);
  for (Eigen::Index y = 0; y < odd.rows(); ++y) {
    for (Eigen::Index x = 0; x < odd.cols(); ++x) {
      odd(y, x) = mrh_test::analytic_pattern(x / s, y / s);
    }
  }
  const Image out2 =
      align_crop(odd, Point{16 * s, 24 * s}, Point{48 * s, 24 * s});
  CHECK((out2 - small).cwiseAbs().mean() < 0.5);
}

TEST_CASE("align_crop rejects coincident eyes") {
  Image img = Image::Zero(8, 8);
  CHECK_THROWS_AS(align_crop(img, Point{2, 2}, Point{2, 2}), DataError);
}

TEST_CASE("signature file round-trips bit-exactly") {
  TempDir dir("sigfile");
  Rng rng(11);
  std::vector<Signature> sigs;
  for (int i = 0; i < 3; ++i) sigs.push_back(mrh_test::random_signature(rng, 8));

  save_signatures(dir.str("s.sig"), sigs);
  const auto loaded = load_signatures(dir.str("s.sig"));
  REQUIRE(loaded.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK((loaded[i] - sigs[i]).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("empty list round-trips") {
    save_signatures(dir.str("empty.sig"), {});
    CHECK(load_signatures(dir.str("empty.sig")).empty());
  }

  SUBCASE("wrong magic is rejected") {
    write_file(dir.str("bad.sig"), "NOPE....");
    CHECK_THROWS_AS(load_signatures(dir.str("bad.sig")), DataError);
  }

  SUBCASE("mixed component counts are rejected") {
    std::vector<Signature> mixed = {mrh_test::random_signature(rng, 8),
                                    mrh_test::random_signature(rng, 4)};
    CHECK_THROWS_AS(save_signatures(dir.str("mixed.sig"), mixed), DataError);
  }
}

TEST_CASE("PGM round trip and PNG decode") {
  TempDir dir("img");
  Image img(5, 7);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 7; ++x) img(y, x) = (y * 7 + x) * 7 % 256;
  }
  save_pgm(dir.str("a.pgm"), img);
  const Image back = load_image(dir.str("a.pgm"));
  CHECK((back - img).cwiseAbs().maxCoeff() == 0.0);

  // Gray PNG written with libpng directly; the loader must read it back.
  {
    std::FILE* f = std::fopen(dir.str("a.png").c_str(), "wb");
    REQUIRE(f != nullptr);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    REQUIRE(setjmp(png_jmpbuf(png)) == 0);
    png_init_io(png, f);
    png_set_IHDR(png, info, 7, 5, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_byte> row(7);
    for (int y = 0; y < 5; ++y) {
      for (int x = 0; x < 7; ++x) row[x] = static_cast<png_byte>(img(y, x));
      png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(f);
  }
  const Image png_back = load_image(dir.str("a.png"));
  CHECK((png_back - img).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(load_image(dir.str("missing.pgm")), DataError);
}
