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

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "autovis/geometry.hpp"
#include "autovis/mapping.hpp"
#include "autovis/raster.hpp"

// Deterministic synthetic scenes for tests and the acceptance run.
namespace autovis::testing {

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi);  // inclusive
double uniform(Rng& rng, double lo, double hi);

Raster random_raster(Rng& rng, int width, int height, int channels);

// --- vehicles -----------------------------------------------------------------

/// Asphalt under a pale sky, lane paint converging to the frame centre.
Raster road_background(Rng& rng, int width = 1280, int height = 720);

/// Paints a stylised car (body, cabin, windows, wheels, lights) filling `box`.
void paint_car(Raster& img, const geometry::Rect& box, Rng& rng);

/// 64x64 training patch of a car, jittered in scale and position.
Raster car_patch(Rng& rng, int size = 64);

/// 64x64 road crop at a detector window scale: car-free, inside a larger car,
/// or framing a car badly (IoU < 0.3), in equal shares.
Raster background_patch(Rng& rng, int size = 64);

struct CarFrame {
  Raster image;
  std::vector<geometry::Rect> cars;
};

/// 1280x720 road frame with `n_cars` non-overlapping cars side by side: same
/// size and row, sized and placed to sit inside one of the default bands.
CarFrame car_frame(Rng& rng, int n_cars);

// --- lanes ----------------------------------------------------------------------

struct LaneScene {
  Raster image;
  double left_bottom_x = 0, left_top_x = 0;    // at y = height - 1 and y = horizon row
  double right_bottom_x = 0, right_top_x = 0;
  int horizon_y = 0;
};

/// Dark road with two bright painted lines symmetric about a random vanishing point.
LaneScene lane_scene(Rng& rng, int width = 640, int height = 360);

void draw_thick_line(Raster& img, double x0, double y0, double x1, double y1, double width,
                     std::uint8_t value);

// --- calibration ------------------------------------------------------------------

/// Light photo with a dark filled rectangle of the given pixel size, centred.
Raster rectangle_photo(int width, int height, int rect_w, int rect_h);

// --- mapping ----------------------------------------------------------------------

/// Ground view of a straight corridor: floor between two walls `half_width_cm`
/// either side of the robot, on a patch of `patch_width_cm` at 1 px per cm.
Raster corridor_frame(double half_width_cm, double patch_width_cm, double patch_depth_cm);

/// A room-like occupancy map: walls around the border, a few interior blocks.
mapping::OccupancyMap room_map(Rng& rng, int width, int height, double cell_cm = 2.0);

/// Cells of `global` seen through the partial frame pose (rotation whole
/// right angles): partial cell (i, j) takes the global cell containing
/// pose applied to its centre.
mapping::OccupancyMap cut_partial(const mapping::OccupancyMap& global, const mapping::Pose& pose,
                                  int width, int height);

}  // namespace autovis::testing
