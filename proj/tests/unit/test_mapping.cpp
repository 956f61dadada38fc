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

#include "autovis/error.hpp"
#include "autovis/mapping.hpp"
#include "doctest.h"
#include "synth.hpp"

using namespace autovis;
using namespace autovis::mapping;
using autovis::testing::Rng;
using autovis::testing::uniform;
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

double angle_gap(double a, double b) {
  const double d = normalize_deg(a - b);
  return std::min(d, 360.0 - d);
}

GroundPatch random_patch(Rng& rng, int cols, int rows) {
  GroundPatch p;
  p.mask = segmentation::LabelMask(cols, rows, 2);
  for (auto& v : p.mask.labels) v = uniform_int(rng, 0, 3) == 0 ? 1 : 0;
  p.width_cm = uniform(rng, 20, 100);
  p.depth_cm = uniform(rng, 20, 80);
  p.offset_cm = uniform(rng, 5, 30);
  return p;
}

}  // namespace

TEST_CASE("advance pose") {
  Pose p = advance_pose({0, 0, 0}, 10, 0);
  CHECK(p.x == 10);
  CHECK(p.y == 0);
  CHECK(p.theta_deg == 0);

  p = advance_pose({0, 0, 0}, 10, 90);
  CHECK(p.x == 0);
  CHECK(p.y == 10);
  CHECK(p.theta_deg == 90);

  Pose q{0, 0, 0};
  for (int i = 0; i < 4; ++i) q = advance_pose(q, 10, 90);
  CHECK(std::abs(q.x) <= 1e-9);
  CHECK(std::abs(q.y) <= 1e-9);
  CHECK(q.theta_deg == 0);

  CHECK(advance_pose({0, 0, 350}, 0, 20).theta_deg == doctest::Approx(10));
  CHECK(advance_pose({0, 0, 10}, 0, -20).theta_deg == doctest::Approx(350));
  CHECK(normalize_deg(-720) == 0);
  CHECK(normalize_deg(360) == 0);
}

TEST_CASE("closed command loops return to the start") {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const Pose start{uniform(rng, -500, 500), uniform(rng, -500, 500), uniform(rng, 0, 360)};
    Pose p = start;
    if (trial % 2 == 0) {
      // regular polygon
      const int k = uniform_int(rng, 3, 12);
      const double leg = uniform(rng, 1, 200);
      for (int i = 0; i < k; ++i) p = advance_pose(p, leg, 360.0 / k);
    } else {
      // out and back along a random path
      const int k = uniform_int(rng, 1, 8);
      std::vector<std::pair<double, double>> cmds;
      for (int i = 0; i < k; ++i) cmds.push_back({uniform(rng, 0, 100), uniform(rng, -180, 180)});
      for (const auto& [f, r] : cmds) p = advance_pose(p, f, r);
      p = advance_pose(p, 0, 180);
      // retrace: drive each leg back, undoing its turn afterwards
      for (auto it = cmds.rbegin(); it != cmds.rend(); ++it) {
        p = advance_pose(p, it->first, 0);
        p = advance_pose(p, 0, -it->second);
      }
      p = advance_pose(p, 0, 180);
    }
    CHECK(std::abs(p.x - start.x) <= 1e-6);
    CHECK(std::abs(p.y - start.y) <= 1e-6);
    CHECK(angle_gap(p.theta_deg, start.theta_deg) <= 1e-6);
  }
}

TEST_CASE("stitching a patch into an empty map reproduces it") {
  Rng rng(3);
  GroundPatch patch;
  patch.mask = segmentation::LabelMask(40, 30, 2);
  for (auto& v : patch.mask.labels) v = uniform_int(rng, 0, 1);
  patch.width_cm = 80;
  patch.depth_cm = 60;
  patch.offset_cm = 20;
  const auto map = stitch_patch(OccupancyMap(2.0), {0, 0, 0}, patch);
  REQUIRE(map.width() == 30);
  REQUIRE(map.height() == 40);
  CHECK(map.origin_x() == 20);
  CHECK(map.origin_y() == -40);
  for (int j = 0; j < 40; ++j)
    for (int i = 0; i < 30; ++i) {
      // +x is forward (mask rows from the bottom), +y is left (mask columns from the right)
      const Cell want = patch.mask.at(39 - j, 29 - i) == 0 ? Cell::kFree : Cell::kOccupied;
      REQUIRE(map.at(i, j) == want);
    }
}

TEST_CASE("fusion rule") {
  OccupancyMap m(2.0, 0, 0, 3, 1);
  m.fuse(0, 0, Cell::kOccupied);
  m.fuse(0, 0, Cell::kFree);
  CHECK(m.at(0, 0) == Cell::kOccupied);
  m.fuse(1, 0, Cell::kFree);
  m.fuse(1, 0, Cell::kUnknown);
  CHECK(m.at(1, 0) == Cell::kFree);
  m.fuse(1, 0, Cell::kOccupied);
  CHECK(m.at(1, 0) == Cell::kOccupied);
  m.fuse(2, 0, Cell::kUnknown);
  CHECK(m.at(2, 0) == Cell::kUnknown);

  Rng rng(5);
  const auto patch = random_patch(rng, 20, 15);
  const Pose pose{12.5, -7, 33};
  const auto once = stitch_patch(OccupancyMap(2.0), pose, patch);
  CHECK(stitch_patch(once, pose, patch) == once);
}

TEST_CASE("stitching is monotone") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    OccupancyMap map(uniform(rng, 1.0, 4.0));
    for (int step = 0; step < 8; ++step) {
      const auto patch = random_patch(rng, uniform_int(rng, 4, 30), uniform_int(rng, 4, 30));
      const Pose pose{uniform(rng, -100, 100), uniform(rng, -100, 100), uniform(rng, 0, 360)};
      const OccupancyMap before = map;
      stitch_patch_inplace(map, pose, patch);
      if (before.empty()) continue;
      REQUIRE(map.width() >= before.width());
      REQUIRE(map.height() >= before.height());
      const int di = static_cast<int>(std::lround((before.origin_x() - map.origin_x()) / map.cell_cm()));
      const int dj = static_cast<int>(std::lround((before.origin_y() - map.origin_y()) / map.cell_cm()));
      REQUIRE(di >= 0);
      REQUIRE(dj >= 0);
      REQUIRE(std::abs(before.origin_x() - map.origin_x() - di * map.cell_cm()) <= 1e-9);
      for (int j = 0; j < before.height(); ++j)
        for (int i = 0; i < before.width(); ++i) {
          const Cell old = before.at(i, j);
          const Cell now = map.at(i + di, j + dj);
          if (old == Cell::kOccupied) REQUIRE(now == Cell::kOccupied);
          if (old != Cell::kUnknown) REQUIRE(now != Cell::kUnknown);
        }
    }
  }
}

TEST_CASE("map grows by whole cells and never shrinks") {
  OccupancyMap m(2.0, 1.0, 1.0);
  m.ensure_contains(0, 0, 10, 4);
  CHECK(m.origin_x() == -1.0);
  CHECK(m.width() == 6);
  CHECK(m.height() == 3);
  m.set(0, 0, Cell::kOccupied);
  m.ensure_contains(2, 2, 3, 3);
  CHECK(m.width() == 6);
  m.ensure_contains(-5, 0, 3, 3);
  CHECK(m.origin_x() == -5.0);
  CHECK(m.at(2, 0) == Cell::kOccupied);
}

TEST_CASE("localize recovers cutouts") {
  Rng rng(77);
  for (int trial = 0; trial < 4; ++trial) {
    const auto global = testing::room_map(rng, 120, 90);
    SUBCASE("axis aligned") {
      // reaches the far walls so the cut is never a featureless stretch of floor
      const Pose truth{40, 60, 0};
      const auto part = testing::cut_partial(global, truth, 100, 60);
      const auto loc = localize(global, part);
      CHECK(std::abs(loc.pose.x - truth.x) <= 2.0);
      CHECK(std::abs(loc.pose.y - truth.y) <= 2.0);
      CHECK(angle_gap(loc.pose.theta_deg, truth.theta_deg) <= 1.0);
      CHECK(loc.score == 1.0);
    }
    SUBCASE("quarter turn") {
      const Pose truth{240, 60, 90};
      const auto part = testing::cut_partial(global, truth, 60, 50);
      const auto loc = localize(global, part);
      CHECK(std::abs(loc.pose.x - truth.x) <= 2.0);
      CHECK(std::abs(loc.pose.y - truth.y) <= 2.0);
      CHECK(angle_gap(loc.pose.theta_deg, truth.theta_deg) <= 1.0);
      CHECK(loc.score == 1.0);
    }
  }
}

TEST_CASE("localize errors") {
  Rng rng(4);
  const auto global = testing::room_map(rng, 60, 40);
  CHECK(kind_of([&] { localize(global, OccupancyMap(2.0, 0, 0, 20, 20)); }) ==
        ErrorKind::kInsufficientMapContent);
  // a checkerboard cannot be placed in the room with any confidence
  OccupancyMap board(2.0, 0, 0, 20, 20);
  for (int j = 0; j < 20; ++j)
    for (int i = 0; i < 20; ++i) board.set(i, j, (i + j) % 2 ? Cell::kOccupied : Cell::kFree);
  CHECK(kind_of([&] { localize(global, board, {50, 0.9}); }) == ErrorKind::kAmbiguousLocalization);
  CHECK(kind_of([&] { localize(global, OccupancyMap(3.0, 0, 0, 20, 20)); }) == ErrorKind::kShape);
}

TEST_CASE("rotation candidates include the right angles") {
  Rng rng(6);
  const auto global = testing::room_map(rng, 60, 40);
  const auto cands = rotation_candidates(global, rotate_map(global, 30));
  for (int a : {0, 90, 180, 270}) CHECK(std::find(cands.begin(), cands.end(), a) != cands.end());
  CHECK(std::is_sorted(cands.begin(), cands.end()));
  CHECK(std::find(cands.begin(), cands.end(), 330) != cands.end());
}

TEST_CASE("rotating a map by a right angle permutes its cells") {
  Rng rng(10);
  const auto m = testing::room_map(rng, 12, 7);
  const auto r = rotate_map(m, 90);
  REQUIRE(r.width() == 7);
  REQUIRE(r.height() == 12);
  CHECK(r.known_cells() == m.known_cells());
  CHECK(rotate_map(rotate_map(r, 90), 180) == m);
}

TEST_CASE("corridor replay measures the corridor") {
  const ExploreConfig cfg;
  const Raster frame = testing::corridor_frame(30, cfg.patch_width_cm, cfg.patch_depth_cm);
  for (int steps : {5, 10, 20}) {
    ExploreState st{OccupancyMap(2.0), Pose{}};
    for (int k = 0; k < steps; ++k) st = explore_step(st.map, st.pose, frame, {20, 0}, cfg);
    const double truth = (steps - 1) * 20 + cfg.patch_depth_cm;
    // free run along the centre line
    const int j = static_cast<int>(std::floor((0.0 - st.map.origin_y()) / st.map.cell_cm()));
    int free = 0;
    for (int i = 0; i < st.map.width(); ++i) free += st.map.at(i, j) == Cell::kFree;
    CHECK(std::abs(free * st.map.cell_cm() - truth) <= 0.05 * truth);
    CHECK(st.pose.x == doctest::Approx(20.0 * steps));
    // the walls are occupied either side
    const int wall = static_cast<int>(std::floor((35.0 - st.map.origin_y()) / st.map.cell_cm()));
    CHECK(st.map.at(st.map.width() / 2, wall) == Cell::kOccupied);
  }
}

TEST_CASE("standing still changes nothing") {
  const ExploreConfig cfg;
  const Raster frame = testing::corridor_frame(25, cfg.patch_width_cm, cfg.patch_depth_cm);
  const auto a = explore_step(OccupancyMap(2.0), {5, 5, 45}, frame, {0, 0}, cfg);
  const auto b = explore_step(a.map, a.pose, frame, {0, 0}, cfg);
  CHECK(b.map == a.map);
  CHECK(b.pose.x == a.pose.x);
  CHECK(b.pose.theta_deg == a.pose.theta_deg);

  CHECK_THROWS_AS(explore_step(OccupancyMap(2.0), {}, Raster(40, 30, 1, 90), {0, 0}, cfg), Error);
}

TEST_CASE("map file round trip") {
  Rng rng(12);
  OccupancyMap map(2.0);
  for (int k = 0; k < 5; ++k) {
    stitch_patch_inplace(map, {uniform(rng, -50, 50), uniform(rng, -50, 50), uniform(rng, 0, 360)},
                         random_patch(rng, 16, 12));
  }
  const auto bytes = write_map(map);
  const auto back = read_map(bytes);
  CHECK(back == map);
  CHECK(write_map(back) == bytes);

  auto broken = bytes;
  broken.erase(broken.begin(), broken.begin() + 3);
  CHECK_THROWS_AS(read_map(broken), Error);
  const std::string bad = "{\"cell_cm\":2}\n";
  CHECK_THROWS_AS(read_map(std::vector<std::uint8_t>(bad.begin(), bad.end())), Error);
}
