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
#include <numbers>

#include "autovis/error.hpp"
#include "autovis/geometry.hpp"
#include "doctest.h"
#include "synth.hpp"

using namespace autovis;
using namespace autovis::geometry;
using autovis::testing::Rng;
using autovis::testing::uniform;
using autovis::testing::uniform_int;

namespace {

// Grid digitization: one pixel per integer step along the major axis.
void draw_digital(Raster& img, int x0, int y0, int x1, int y1) {
  const bool steep = std::abs(y1 - y0) > std::abs(x1 - x0);
  int u0 = steep ? y0 : x0, v0 = steep ? x0 : y0, u1 = steep ? y1 : x1, v1 = steep ? x1 : y1;
  if (u0 > u1) {
    std::swap(u0, u1);
    std::swap(v0, v1);
  }
  for (int u = u0; u <= u1; ++u) {
    const double v = u1 == u0 ? v0 : v0 + static_cast<double>(u - u0) * (v1 - v0) / (u1 - u0);
    const int vi = static_cast<int>(std::floor(v + 0.5));
    img.at(steep ? vi : u, steep ? u : vi) = 255;
  }
}

// Distance between (rho, theta) pairs, treating (rho, theta) ~ (-rho, theta - 180).
std::pair<double, double> line_error(double rho, double theta, double rho_ref, double theta_ref) {
  double dt = theta - theta_ref;
  double dr = rho - rho_ref;
  if (dt > 90) {
    dt -= 180;
    dr = -rho - rho_ref;
  } else if (dt < -90) {
    dt += 180;
    dr = -rho - rho_ref;
  }
  return {std::abs(dr), std::abs(dt)};
}

}  // namespace

TEST_CASE("hough axis-aligned lines") {
  Raster img(50, 50, 1);
  for (int x = 0; x < 50; ++x) img.at(x, 10) = 255;
  auto lines = hough_lines(img, 10);
  REQUIRE(!lines.empty());
  CHECK(lines[0].rho == 10);
  CHECK(lines[0].theta_deg == 90);
  CHECK(lines[0].votes == 50);

  Raster col(50, 50, 1);
  for (int y = 0; y < 50; ++y) col.at(20, y) = 255;
  lines = hough_lines(col, 10);
  REQUIRE(!lines.empty());
  CHECK(lines[0].rho == 20);
  CHECK(lines[0].theta_deg == 0);

  CHECK(hough_lines(Raster(50, 50, 1), 1).empty());
}

TEST_CASE("hough votes only count pixels within half a pixel of the line") {
  Rng rng(3);
  Raster img(60, 40, 1);
  for (int i = 0; i < 200; ++i) img.at(uniform_int(rng, 0, 59), uniform_int(rng, 0, 39)) = 255;
  for (const auto& l : hough_lines(img, 3)) {
    int near = 0;
    for (int y = 0; y < img.height(); ++y)
      for (int x = 0; x < img.width(); ++x)
        if (img.at(x, y) && std::abs(x * hough_cos(l.theta_deg) + y * hough_sin(l.theta_deg) - l.rho) <= 0.5)
          ++near;
    REQUIRE(l.votes <= near);
  }
}

TEST_CASE("hough output is sorted by votes then theta and rho") {
  Rng rng(9);
  Raster img(40, 40, 1);
  for (int i = 0; i < 120; ++i) img.at(uniform_int(rng, 0, 39), uniform_int(rng, 0, 39)) = 255;
  const auto lines = hough_lines(img, 2);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& a = lines[i - 1];
    const auto& b = lines[i];
    const bool ordered = a.votes > b.votes ||
                         (a.votes == b.votes && (a.theta_deg < b.theta_deg ||
                                                 (a.theta_deg == b.theta_deg && a.rho < b.rho)));
    REQUIRE(ordered);
  }
}

TEST_CASE("hough recovers random segments") {
  Rng rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    Raster img(120, 100, 1);
    int x0, y0, x1, y1;
    do {
      x0 = uniform_int(rng, 0, 119);
      y0 = uniform_int(rng, 0, 99);
      x1 = uniform_int(rng, 0, 119);
      y1 = uniform_int(rng, 0, 99);
    } while (std::hypot(x1 - x0, y1 - y0) < 20);
    draw_digital(img, x0, y0, x1, y1);
    // normal direction of the segment
    double theta = std::atan2(x1 - x0, -(y1 - y0)) * 180 / std::numbers::pi;
    if (theta < 0) theta += 180;
    if (theta >= 180) theta -= 180;
    const double rho = x0 * std::cos(theta * std::numbers::pi / 180) + y0 * std::sin(theta * std::numbers::pi / 180);
    const auto lines = hough_lines(img, 10);
    REQUIRE(!lines.empty());
    const auto [dr, dt] = line_error(lines[0].rho, lines[0].theta_deg, rho, theta);
    CAPTURE(trial);
    CHECK(dr <= 1.0);
    CHECK(dt <= 1.0);
  }
}

TEST_CASE("raw peaks stay on the integer grid") {
  Raster img(50, 50, 1);
  draw_digital(img, 3, 40, 45, 9);
  for (const auto& l : hough_lines_about(img, 5, 0.0)) {
    CHECK(l.rho == std::floor(l.rho));
    CHECK(l.theta_deg == std::floor(l.theta_deg));
  }
}

TEST_CASE("contours") {
  SUBCASE("filled rectangle") {
    Raster img(140, 90, 1);
    for (int y = 10; y < 70; ++y)
      for (int x = 20; x < 120; ++x) img.at(x, y) = 255;
    const auto cs = find_contours(img);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].bbox.w == 100);
    CHECK(cs[0].bbox.h == 60);
    CHECK(cs[0].area == 6000);
    for (const auto& p : cs[0].pixels) CHECK(cs[0].bbox.contains(p));
    CHECK(cs[0].pixels.size() == 2 * 100 + 2 * 60 - 4);
  }
  SUBCASE("area ordering") {
    Raster img(60, 60, 1);
    for (int y = 2; y < 12; ++y)
      for (int x = 2; x < 12; ++x) img.at(x, y) = 255;
    for (int y = 30; y < 50; ++y)
      for (int x = 30; x < 50; ++x) img.at(x, y) = 255;
    const auto cs = find_contours(img);
    REQUIRE(cs.size() == 2);
    CHECK(cs[0].bbox.w == 20);
    CHECK(cs[1].bbox.w == 10);
  }
  SUBCASE("empty mask") { CHECK(find_contours(Raster(5, 5, 1)).empty()); }
  SUBCASE("areas partition the foreground") {
    Rng rng(15);
    for (int trial = 0; trial < 20; ++trial) {
      Raster img(30, 20, 1);
      int fg = 0;
      for (auto& v : img.data()) {
        v = uniform_int(rng, 0, 2) == 0 ? 255 : 0;
        fg += v != 0;
      }
      int sum = 0;
      for (const auto& c : find_contours(img)) {
        sum += c.area;
        CHECK(c.area <= c.bbox.area());
        for (const auto& p : c.pixels) REQUIRE(c.bbox.contains(p));
      }
      CHECK(sum == fg);
    }
  }
}

TEST_CASE("largest rectangle") {
  SUBCASE("measures a black rectangle on white") {
    const Raster img = testing::rectangle_photo(320, 240, 120, 80);
    const auto c = largest_rectangle(img);
    CHECK(std::abs(c.bbox.w - 120) <= 2);
    CHECK(std::abs(c.bbox.h - 80) <= 2);
  }
  SUBCASE("prefers the larger of two") {
    Raster img(400, 200, 1, 220);
    for (int y = 40; y < 120; ++y)
      for (int x = 30; x < 150; ++x) img.at(x, y) = 30;
    for (int y = 60; y < 90; ++y)
      for (int x = 250; x < 290; ++x) img.at(x, y) = 30;
    const auto c = largest_rectangle(img);
    CHECK(std::abs(c.bbox.w - 120) <= 2);
    CHECK(std::abs(c.bbox.x - 30) <= 2);
  }
  SUBCASE("blank image") {
    try {
      largest_rectangle(Raster(50, 50, 1, 200));
      FAIL("expected no rectangle");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kNoRectangle);
    }
  }
}

TEST_CASE("iou") {
  CHECK(iou({0, 0, 10, 10}, {0, 0, 10, 10}) == 1.0);
  CHECK(iou({0, 0, 10, 10}, {10, 0, 10, 10}) == 0.0);
  CHECK(iou({0, 0, 10, 10}, {5, 0, 10, 10}) == doctest::Approx(50.0 / 150.0));
}

TEST_CASE("lane region of interest is a centred trapezoid") {
  LaneConfig cfg;
  const Raster m = lane_roi_mask(101, 50, cfg);
  for (int y = 0; y < 30; ++y) CHECK(m.at(50, y) == 0);
  for (int x = 0; x < 101; ++x) CHECK(m.at(x, 49) == 255);
  CHECK(m.at(50, 30) == 255);
  CHECK(m.at(0, 30) == 0);
  CHECK(mirror_horizontal(m) == m);
}

TEST_CASE("lane detection on synthetic roads") {
  Rng rng(2024);
  for (int trial = 0; trial < 6; ++trial) {
    const auto scene = testing::lane_scene(rng);
    const Lane lane = detect_lane(scene.image);
    REQUIRE(lane.left.valid);
    REQUIRE(lane.right.valid);
    CHECK(lane.left.y0 == scene.image.height() - 1);
    CHECK(lane.left.y1 == scene.horizon_y);
    CHECK(std::abs(lane.left.x0 - scene.left_bottom_x) <= 3.0);
    CHECK(std::abs(lane.left.x1 - scene.left_top_x) <= 3.0);
    CHECK(std::abs(lane.right.x0 - scene.right_bottom_x) <= 3.0);
    CHECK(std::abs(lane.right.x1 - scene.right_top_x) <= 3.0);
    // left leans right going up, right leans left: slopes -/+ with y down
    CHECK((lane.left.y1 - lane.left.y0) / (lane.left.x1 - lane.left.x0) < 0);
    CHECK((lane.right.y1 - lane.right.y0) / (lane.right.x1 - lane.right.x0) > 0);

    const Lane mirrored = detect_lane(mirror_horizontal(scene.image));
    const double w1 = scene.image.width() - 1;
    REQUIRE(mirrored.left.valid);
    REQUIRE(mirrored.right.valid);
    CHECK(mirrored.left.x0 == w1 - lane.right.x0);
    CHECK(mirrored.left.x1 == w1 - lane.right.x1);
    CHECK(mirrored.right.x0 == w1 - lane.left.x0);
    CHECK(mirrored.right.x1 == w1 - lane.left.x1);
  }
}

TEST_CASE("lane detection reports a missing side") {
  Raster img(320, 180, 1, 70);
  testing::draw_thick_line(img, 40, 183, 160, 80, 3.0, 235);
  const Lane lane = detect_lane(img);
  CHECK(lane.left.valid);
  CHECK_FALSE(lane.right.valid);
}

TEST_CASE("drawing stays inside the image") {
  Raster rgb(20, 10, 3);
  draw_rect(rgb, {0, 0, 20, 10}, 3);
  CHECK(rgb.at(0, 0, 0) == 255);
  CHECK(rgb.at(0, 0, 1) == 0);
  CHECK(rgb.at(10, 5, 0) == 0);
  Raster gray(20, 10, 1);
  draw_segment(gray, {-5, -5, 30, 30, true});
  CHECK(gray.at(5, 5) == 255);
}
