/*
 * Copyright 2026 The autovis Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <string>

#include "autovis/error.hpp"
#include "autovis/raster.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "synth.hpp"

using namespace autovis;
using autovis::testing::Rng;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& header, std::vector<std::uint8_t> payload) {
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an autovis::Error");
  return ErrorKind::kUsage;
}

}  // namespace

TEST_CASE("raster construction checks sizes") {
  CHECK_THROWS_AS(Raster(0, 3, 1), Error);
  CHECK_THROWS_AS(Raster(2, 2, 2), Error);
  CHECK_THROWS_AS(Raster(2, 2, 1, std::vector<std::uint8_t>(3)), Error);
  const Raster r(3, 2, 3, 7);
  CHECK(r.size() == 18);
  CHECK(r.at(2, 1, 2) == 7);
}

TEST_CASE("grayscale uses luma weights and rounds") {
  Raster rgb(3, 1, 3, std::vector<std::uint8_t>{255, 255, 255, 0, 0, 0, 255, 0, 0});
  const Raster g = to_grayscale(rgb);
  CHECK(g.channels() == 1);
  CHECK(g.at(0, 0) == 255);
  CHECK(g.at(1, 0) == 0);
  CHECK(g.at(2, 0) == 76);
  CHECK(kind_of([&] { to_grayscale(g); }) == ErrorKind::kAlreadyGrayscale);
}

TEST_CASE("grayscale matches the formula on random pixels") {
  Rng rng(11);
  const Raster rgb = testing::random_raster(rng, 37, 19, 3);
  const Raster g = to_grayscale(rgb);
  for (int y = 0; y < rgb.height(); ++y) {
    for (int x = 0; x < rgb.width(); ++x) {
      const double v = 0.299 * rgb.at(x, y, 0) + 0.587 * rgb.at(x, y, 1) + 0.114 * rgb.at(x, y, 2);
      REQUIRE(g.at(x, y) == static_cast<int>(std::floor(v + 0.5)));
    }
  }
}

TEST_CASE("identity kernel is the identity") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Raster img = testing::random_raster(rng, testing::uniform_int(rng, 1, 40),
                                              testing::uniform_int(rng, 1, 40), 1);
    CHECK(convolve3(img, Kernel3::identity()) == img);
  }
}

TEST_CASE("gaussian of a constant image is that constant") {
  for (int v : {0, 1, 77, 128, 255}) {
    const Raster img(9, 7, 1, static_cast<std::uint8_t>(v));
    CHECK(gaussian_blur(img) == img);
    CHECK(gaussian_blur(img, 3) == img);
  }
}

TEST_CASE("convolution matches a direct neighbourhood sum") {
  Rng rng(5);
  const std::vector<Kernel3> kernels{Kernel3::gaussian(), Kernel3::sobel_x(), Kernel3::sobel_y(),
                                     Kernel3({0.5, -1, 2.25, 0, 1, 0, -3, 1, 0.125}, 3.0)};
  for (const auto& k : kernels) {
    const Raster img = testing::random_raster(rng, 31, 23, 1);
    CHECK(convolve3(img, k) == oracle::naive_convolve(img, k.weights, k.divisor));
  }
}

TEST_CASE("sobel-x on a step clamps at 255") {
  Raster img(6, 6, 1);
  for (int y = 0; y < 6; ++y)
    for (int x = 3; x < 6; ++x) img.at(x, y) = 255;
  CHECK(convolve3(img, Kernel3::sobel_x()).at(2, 2) == 255);
}

TEST_CASE("sobel magnitude") {
  SUBCASE("constant image has no gradient") {
    const Raster img(8, 8, 1, 90);
    const Raster m = sobel_magnitude(img);
    for (auto v : m.data()) CHECK(v == 0);
  }
  SUBCASE("vertical step only responds next to the edge") {
    Raster img(10, 6, 1);
    for (int y = 0; y < 6; ++y)
      for (int x = 5; x < 10; ++x) img.at(x, y) = 100;
    const Raster m = sobel_magnitude(img);
    for (int y = 0; y < 6; ++y) {
      for (int x = 0; x < 10; ++x) {
        if (x == 4 || x == 5) {
          CHECK(m.at(x, y) == 255);  // |gx| = 400 clamps
        } else {
          CHECK(m.at(x, y) == 0);
        }
      }
    }
  }
  SUBCASE("transposition commutes") {
    Rng rng(8);
    const Raster img = testing::random_raster(rng, 17, 29, 1);
    CHECK(sobel_magnitude(transpose(img)) == transpose(sobel_magnitude(img)));
  }
}

TEST_CASE("threshold is inclusive") {
  Raster img(3, 1, 1, std::vector<std::uint8_t>{127, 128, 254});
  const Raster t0 = threshold_binary(img, 0);
  for (auto v : t0.data()) CHECK(v == 255);
  const Raster t = threshold_binary(img, 128);
  CHECK(t.at(0, 0) == 0);
  CHECK(t.at(1, 0) == 255);
  CHECK(threshold_binary(img, 255).at(2, 0) == 0);
}

TEST_CASE("pnm parsing") {
  SUBCASE("P5 payload order") {
    const auto r = read_pnm(bytes_of("P5\n2 2\n255\n", {0, 64, 128, 255}));
    CHECK(r.width() == 2);
    CHECK(r.height() == 2);
    CHECK(r.channels() == 1);
    CHECK(r.at(0, 0) == 0);
    CHECK(r.at(1, 0) == 64);
    CHECK(r.at(0, 1) == 128);
    CHECK(r.at(1, 1) == 255);
  }
  SUBCASE("comments and odd whitespace") {
    const auto r = read_pnm(bytes_of("P6 # colour\n#size next\n 1\t1 \n255\n", {1, 2, 3}));
    CHECK(r.channels() == 3);
    CHECK(r.at(0, 0, 2) == 3);
  }
  SUBCASE("errors are distinct") {
    CHECK(kind_of([] { read_pnm(bytes_of("P3\n1 1\n255\n", {0})); }) == ErrorKind::kPnmHeader);
    CHECK(kind_of([] { read_pnm(bytes_of("P5\n1\n", {})); }) == ErrorKind::kPnmHeader);
    CHECK(kind_of([] { read_pnm(bytes_of("P5\n1 1\n65535\n", {0, 0})); }) == ErrorKind::kPnmMaxval);
    CHECK(kind_of([] { read_pnm(bytes_of("P6\n2 2\n255\n", {1, 2, 3, 4, 5})); }) ==
          ErrorKind::kPnmTruncated);
  }
  SUBCASE("writer emits a canonical header") {
    const Raster r(2, 1, 1, std::vector<std::uint8_t>{9, 8});
    CHECK(write_pnm(r) == bytes_of("P5\n2 1\n255\n", {9, 8}));
  }
}

TEST_CASE("pnm round trip on random rasters") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const int ch = trial % 2 == 0 ? 1 : 3;
    const Raster img = testing::random_raster(rng, testing::uniform_int(rng, 1, 30),
                                              testing::uniform_int(rng, 1, 30), ch);
    const auto bytes = write_pnm(img);
    const Raster back = read_pnm(bytes);
    REQUIRE(back == img);
    CHECK(write_pnm(back) == bytes);
  }
}

TEST_CASE("geometric helpers") {
  Rng rng(4);
  const Raster img = testing::random_raster(rng, 7, 5, 3);
  CHECK(transpose(transpose(img)) == img);
  CHECK(mirror_horizontal(mirror_horizontal(img)) == img);
  CHECK(mirror_horizontal(img).at(0, 2, 1) == img.at(6, 2, 1));
  const Raster c = crop(img, 2, 1, 3, 2);
  CHECK(c.at(0, 0, 0) == img.at(2, 1, 0));
  CHECK(c.at(2, 1, 2) == img.at(4, 2, 2));
  CHECK_THROWS_AS(crop(img, 5, 0, 3, 1), Error);
}

TEST_CASE("bilinear resize") {
  Rng rng(6);
  const Raster img = testing::random_raster(rng, 12, 9, 3);
  CHECK(resize_bilinear(img, 12, 9) == img);
  const Raster flat(13, 11, 3, 140);
  const Raster small = resize_bilinear(flat, 5, 4);
  for (auto v : small.data()) CHECK(v == 140);
}
