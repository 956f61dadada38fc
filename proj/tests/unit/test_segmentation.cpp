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

#include <algorithm>
#include <cmath>
#include <set>

#include "autovis/error.hpp"
#include "autovis/segmentation.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "synth.hpp"

using namespace autovis;
using namespace autovis::segmentation;
using autovis::testing::Rng;
using autovis::testing::uniform_int;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an autovis::Error");
  return ErrorKind::kUsage;
}

// Gray image whose histogram has a handful of random spikes.
Raster spiky_image(Rng& rng) {
  const int spikes = uniform_int(rng, 2, 12);
  std::vector<std::uint8_t> px;
  std::set<int> used;
  while (static_cast<int>(used.size()) < spikes) used.insert(uniform_int(rng, 0, 255));
  for (int v : used) {
    const int count = uniform_int(rng, 1, 300);
    px.insert(px.end(), count, static_cast<std::uint8_t>(v));
  }
  return Raster(static_cast<int>(px.size()), 1, 1, px);
}

}  // namespace

TEST_CASE("otsu picks the smallest maximiser") {
  std::vector<std::uint8_t> px(100, 50);
  px.insert(px.end(), 100, 200);
  const Raster img(20, 10, 1, px);
  const auto r = otsu_threshold(img);
  CHECK(r.threshold == 51);
  CHECK(r.between_class_variance == doctest::Approx(0.25 * 150.0 * 150.0));
}

TEST_CASE("otsu on a constant image is degenerate") {
  CHECK(kind_of([] { otsu_threshold(Raster(4, 4, 1, 9)); }) == ErrorKind::kDegenerateHistogram);
}

TEST_CASE("otsu agrees with the exhaustive integer oracle") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const Raster img = trial % 2 == 0 ? spiky_image(rng)
                                      : testing::random_raster(rng, uniform_int(rng, 2, 40), 7, 1);
    const auto hist = histogram(img);
    if (std::count_if(hist.begin(), hist.end(), [](auto c) { return c > 0; }) < 2) continue;
    const auto r = otsu_threshold(img);
    REQUIRE(r.threshold == oracle::brute_otsu(hist));
    CHECK(r.between_class_variance == between_class_variance(hist, r.threshold));
  }
}

TEST_CASE("between-class variance is zero when a side is empty") {
  const auto hist = histogram(Raster(3, 1, 1, std::vector<std::uint8_t>{10, 20, 30}));
  CHECK(between_class_variance(hist, 0) == 0.0);
  CHECK(between_class_variance(hist, 31) == 0.0);
  CHECK(between_class_variance(hist, 15) > 0.0);
}

TEST_CASE("kmeans basics") {
  Rng rng(2);
  const Raster img = testing::random_raster(rng, 20, 10, 1);
  SUBCASE("k = 1 labels everything 0") {
    const auto m = kmeans_segment(img, 1, 50, 1e-9);
    CHECK(m.num_labels == 1);
    for (auto l : m.labels) CHECK(l == 0);
  }
  SUBCASE("too many clusters") {
    CHECK(kind_of([] { kmeans_segment(Raster(3, 1, 1, std::vector<std::uint8_t>{1, 1, 2}), 3, 10, 0); }) ==
          ErrorKind::kInsufficientDistinct);
  }
}

TEST_CASE("kmeans splits a two-band image at the gap") {
  Rng rng(8);
  Raster img(40, 30, 1);
  for (auto& v : img.data()) {
    v = static_cast<std::uint8_t>(uniform_int(rng, 0, 1) == 0 ? uniform_int(rng, 10, 20) : uniform_int(rng, 200, 210));
  }
  const auto r = kmeans_cluster(img, 2, 100, 0.0);
  const auto split = oracle::best_two_means(img);
  for (std::size_t i = 0; i < img.size(); ++i) {
    REQUIRE(r.mask.labels[i] == (img.data()[i] >= split.threshold ? 1 : 0));
  }
}

TEST_CASE("kmeans objective never increases and ends at a fixed point") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int ch = trial % 2 == 0 ? 1 : 3;
    const Raster img = testing::random_raster(rng, 16, 12, ch);
    const int k = uniform_int(rng, 2, 5);
    const auto r = kmeans_cluster(img, k, 100, 0.0);
    for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
      REQUIRE(r.objective_history[i] <= r.objective_history[i - 1] + 1e-9);
    }
    for (std::size_t c = 1; c < r.centers.size(); ++c) CHECK(r.centers[c - 1][0] <= r.centers[c][0]);
    // Reassigning every pixel to its nearest final centre changes nothing.
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        double best = 1e300;
        int arg = 0;
        for (int c = 0; c < k; ++c) {
          double d = 0;
          for (int j = 0; j < ch; ++j) {
            const double diff = img.at(x, y, j) - r.centers[c][j];
            d += diff * diff;
          }
          if (d < best) {
            best = d;
            arg = c;
          }
        }
        const double own = [&] {
          double d = 0;
          for (int j = 0; j < ch; ++j) {
            const double diff = img.at(x, y, j) - r.centers[r.mask.at(x, y)][j];
            d += diff * diff;
          }
          return d;
        }();
        REQUIRE(own <= best + 1e-9);
        (void)arg;
      }
    }
  }
}

TEST_CASE("watershed") {
  SUBCASE("one seed floods everything") {
    Rng rng(1);
    const Raster h = testing::random_raster(rng, 9, 8, 1);
    LabelMask seeds(9, 8, 2);
    seeds.at(4, 4) = 1;
    const auto r = watershed(h, seeds);
    for (auto l : r.labels.labels) CHECK(l == 1);
    for (auto v : r.lines.data()) CHECK(v == 0);
  }
  SUBCASE("two seeds on a flat image are deterministic") {
    const Raster h(12, 5, 1, 10);
    LabelMask seeds(12, 5, 3);
    seeds.at(0, 2) = 1;
    seeds.at(11, 2) = 2;
    const auto a = watershed(h, seeds);
    const auto b = watershed(h, seeds);
    CHECK(a.labels == b.labels);
    CHECK(a.lines == b.lines);
    CHECK(a.labels.at(0, 2) == 1);
    CHECK(a.labels.at(11, 2) == 2);
  }
  SUBCASE("bright ridge becomes the watershed line") {
    Raster h(7, 7, 1, 0);
    for (int y = 0; y < 7; ++y) h.at(3, y) = 255;
    LabelMask seeds(7, 7, 3);
    seeds.at(1, 3) = 1;
    seeds.at(5, 3) = 2;
    const auto r = watershed(h, seeds);
    for (int y = 0; y < 7; ++y) {
      for (int x = 0; x < 7; ++x) {
        CHECK((r.lines.at(x, y) == 255) == (x == 3));
        if (x < 3) CHECK(r.labels.at(x, y) == 1);
        if (x > 3) CHECK(r.labels.at(x, y) == 2);
      }
    }
  }
  SUBCASE("no seeds") {
    CHECK(kind_of([] { watershed(Raster(3, 3, 1), LabelMask(3, 3, 2)); }) == ErrorKind::kNoMarkers);
  }
  SUBCASE("random heights: full coverage with exactly the seed labels") {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
      const Raster h = testing::random_raster(rng, 15, 11, 1);
      LabelMask seeds(15, 11, 5);
      std::set<int> used;
      for (int s = 0; s < 4; ++s) {
        const int label = uniform_int(rng, 1, 4);
        seeds.at(uniform_int(rng, 0, 14), uniform_int(rng, 0, 10)) = label;
      }
      for (auto l : seeds.labels)
        if (l > 0) used.insert(l);
      const auto r = watershed(h, seeds);
      std::set<int> got(r.labels.labels.begin(), r.labels.labels.end());
      CHECK(got == used);
      CHECK(watershed(h, seeds).labels == r.labels);
    }
  }
}

TEST_CASE("chamfer distance of a bar") {
  std::vector<std::uint8_t> inside(7 * 3, 0);
  for (int x = 0; x < 7; ++x) inside[7 + x] = 1;  // middle row
  const auto d = distance_transform(inside, 7, 3);
  for (int x = 0; x < 7; ++x) CHECK(d[7 + x] == doctest::Approx(1.0));
  CHECK(d[0] == 0.0);
}

TEST_CASE("method names") {
  CHECK(parse_method("otsu") == Method::kOtsu);
  CHECK(parse_method("kmeans") == Method::kKMeans);
  CHECK(parse_method("watershed") == Method::kWatershed);
  CHECK(method_name(Method::kWatershed) == "watershed");
  CHECK(kind_of([] { parse_method("bogus"); }) == ErrorKind::kConfig);
}

namespace {

Raster floor_scene(Rng& rng, bool stain, LabelMask* truth) {
  Raster img(80, 60, 3);
  if (truth) *truth = LabelMask(80, 60, 2);
  for (int y = 0; y < 60; ++y) {
    for (int x = 0; x < 80; ++x) {
      int v = 190 + uniform_int(rng, -3, 3);
      const bool box = x >= 25 && x < 50 && y >= 10 && y < 30;
      if (box) v = 40 + uniform_int(rng, -3, 3);
      if (stain && !box && x >= 5 && x < 20 && y >= 40 && y < 55) v += uniform_int(rng, -10, 10);
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<std::uint8_t>(v);
      if (truth && box) truth->at(x, y) = 1;
    }
  }
  return img;
}

}  // namespace

TEST_CASE("segment_floor labels a dark box as obstacle with every method") {
  Rng rng(5);
  for (auto method : {Method::kOtsu, Method::kKMeans, Method::kWatershed}) {
    LabelMask truth;
    const Raster img = floor_scene(rng, false, &truth);
    FloorConfig cfg;
    cfg.method = method;
    const auto m = segment_floor(img, cfg);
    CHECK(m.num_labels == 2);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < m.labels.size(); ++i) agree += m.labels[i] == truth.labels[i];
    CAPTURE(method_name(method));
    CHECK(static_cast<double>(agree) / m.labels.size() >= 0.99);
    CHECK(m.at(40, 59) == 0);
  }
}

TEST_CASE("segment_floor ignores a faint stain after blurring") {
  Rng rng(6);
  const Raster img = floor_scene(rng, true, nullptr);
  for (auto method : {Method::kOtsu, Method::kKMeans, Method::kWatershed}) {
    FloorConfig cfg;
    cfg.method = method;
    const auto m = segment_floor(img, cfg);
    int stained_obstacles = 0;
    for (int y = 40; y < 55; ++y)
      for (int x = 5; x < 20; ++x) stained_obstacles += m.at(x, y);
    CAPTURE(method_name(method));
    CHECK(stained_obstacles < 0.01 * 15 * 15);
  }
}

TEST_CASE("segment_floor propagates a degenerate histogram") {
  CHECK(kind_of([] { segment_floor(Raster(10, 10, 1, 128), FloorConfig{}); }) ==
        ErrorKind::kDegenerateHistogram);
}

TEST_CASE("segment_floor output is binary with the anchor on the floor") {
  Rng rng(44);
  for (int trial = 0; trial < 15; ++trial) {
    const Raster img = testing::random_raster(rng, uniform_int(rng, 3, 30), uniform_int(rng, 3, 30), 1);
    FloorConfig cfg;
    cfg.method = static_cast<Method>(trial % 3);
    const auto m = segment_floor(img, cfg);
    for (auto l : m.labels) REQUIRE((l == 0 || l == 1));
    CHECK(m.at(img.width() / 2, img.height() - 1) == 0);
  }
}

TEST_CASE("mask raster round trip") {
  LabelMask m(3, 2, 2);
  m.at(1, 1) = 1;
  const Raster r = mask_to_raster(m);
  CHECK(r.at(1, 1) == 255);
  CHECK(r.at(0, 0) == 0);
  CHECK(raster_to_mask(r) == m);
}
