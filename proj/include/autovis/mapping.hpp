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
#include <span>
#include <vector>

#include "autovis/raster.hpp"
#include "autovis/segmentation.hpp"

namespace autovis::mapping {

/// Robot pose in the map frame: centimetres, heading in degrees
/// counter-clockwise from +x, normalised to [0, 360).
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta_deg = 0.0;
};

double normalize_deg(double deg);

/// cos/sin of an angle in degrees, exact at multiples of 90.
double cos_deg(double deg);
double sin_deg(double deg);

/// Rotate in place, then drive `forward_cm` along the new heading.
Pose advance_pose(const Pose& p, double forward_cm, double rotate_deg);

enum class Cell : std::uint8_t { kUnknown = 0, kFree = 1, kOccupied = 2 };

/// Tri-state grid. Cell (i, j) covers [origin_x + i*cell, origin_x + (i+1)*cell)
/// along x and likewise along y; row j = 0 is the smallest y.
class OccupancyMap {
 public:
  explicit OccupancyMap(double cell_cm = 2.0, double origin_x = 0.0, double origin_y = 0.0);
  OccupancyMap(double cell_cm, double origin_x, double origin_y, int width, int height);

  double cell_cm() const { return cell_cm_; }
  double origin_x() const { return origin_x_; }
  double origin_y() const { return origin_y_; }
  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  Cell at(int i, int j) const { return static_cast<Cell>(cells_[index(i, j)]); }
  void set(int i, int j, Cell c) { cells_[index(i, j)] = static_cast<std::uint8_t>(c); }
  std::span<const std::uint8_t> row(int j) const {
    return std::span<const std::uint8_t>(cells_).subspan(static_cast<std::size_t>(j) * width_, width_);
  }
  std::span<const std::uint8_t> raw() const { return cells_; }

  std::size_t known_cells() const;

  /// Grows (never shrinks) so the world rectangle is covered; the origin
  /// moves only by whole cells.
  void ensure_contains(double min_x, double min_y, double max_x, double max_y);

  /// Occupied always wins; free replaces unknown; unknown changes nothing.
  void fuse(int i, int j, Cell observed);

  friend bool operator==(const OccupancyMap&, const OccupancyMap&) = default;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * width_ + i; }

  double cell_cm_;
  double origin_x_;
  double origin_y_;
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> cells_;
};

/// Segmented ground view: a width_cm x depth_cm rectangle starting offset_cm
/// ahead of the robot. Mask row 0 is the far edge, column 0 the robot's left;
/// label 0 = floor, anything else = obstacle.
struct GroundPatch {
  segmentation::LabelMask mask;
  double width_cm = 80.0;
  double depth_cm = 60.0;
  double offset_cm = 20.0;
};

void stitch_patch_inplace(OccupancyMap& map, const Pose& pose, const GroundPatch& patch);
OccupancyMap stitch_patch(const OccupancyMap& map, const Pose& pose, const GroundPatch& patch);

struct LocalizeConfig {
  int min_known = 50;
  double min_score = 0.6;
  int wall_peaks = 3;
  int wall_min_votes = 5;
};

struct Localization {
  Pose pose;  // maps partial-frame points into the global frame
  double score = 0.0;
  std::size_t overlap = 0;
};

/// Rotation candidates: pairwise differences of the dominant wall directions
/// of both maps plus the four right angles, whole degrees, ascending.
std::vector<int> rotation_candidates(const OccupancyMap& global, const OccupancyMap& partial,
                                     const LocalizeConfig& cfg = {});

Localization localize(const OccupancyMap& global, const OccupancyMap& partial,
                      const LocalizeConfig& cfg = {});

/// Cells of `partial` rotated by `theta_deg` about its frame origin and
/// resampled (nearest cell) on a grid aligned to multiples of the cell size.
OccupancyMap rotate_map(const OccupancyMap& partial, int theta_deg);

struct Motion {
  double forward_cm = 0.0;
  double rotate_deg = 0.0;
};

struct ExploreConfig {
  segmentation::FloorConfig segmentation;
  double patch_width_cm = 80.0;
  double patch_depth_cm = 60.0;
  double patch_offset_cm = 20.0;
};

struct ExploreState {
  OccupancyMap map;
  Pose pose;
};

/// Segment the frame, stitch it at the current pose, then apply the motion.
ExploreState explore_step(const OccupancyMap& map, const Pose& pose, const Raster& frame,
                          const Motion& motion, const ExploreConfig& cfg = {});

/// unknown = 128, free = 255, occupied = 0.
Raster map_to_raster(const OccupancyMap& map);
OccupancyMap raster_to_map(const Raster& img, double cell_cm, double origin_x, double origin_y);

/// One JSON header line {cell_cm, origin, width, height} followed by a P5 body.
std::vector<std::uint8_t> write_map(const OccupancyMap& map);
OccupancyMap read_map(std::span<const std::uint8_t> bytes);

}  // namespace autovis::mapping
