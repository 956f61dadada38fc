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

#include "autovis/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <thread>

#include "autovis/error.hpp"
#include "autovis/geometry.hpp"
#include "autovis/simd/kernels.hpp"
#include "json.hpp"

namespace autovis::mapping {

namespace {

// Slack for grid-bound rounding so exact corners do not spill into an extra cell.
constexpr double kGridEps = 1e-9;

}  // namespace

double normalize_deg(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;
  return r;
}

double cos_deg(double deg) {
  const double n = normalize_deg(deg);
  if (n == 0.0) return 1.0;
  if (n == 90.0 || n == 270.0) return 0.0;
  if (n == 180.0) return -1.0;
  return std::cos(n * std::numbers::pi / 180.0);
}

double sin_deg(double deg) {
  const double n = normalize_deg(deg);
  if (n == 0.0 || n == 180.0) return 0.0;
  if (n == 90.0) return 1.0;
  if (n == 270.0) return -1.0;
  return std::sin(n * std::numbers::pi / 180.0);
}

Pose advance_pose(const Pose& p, double forward_cm, double rotate_deg) {
  Pose out;
  out.theta_deg = normalize_deg(p.theta_deg + rotate_deg);
  out.x = p.x + forward_cm * cos_deg(out.theta_deg);
  out.y = p.y + forward_cm * sin_deg(out.theta_deg);
  return out;
}

// --- OccupancyMap -------------------------------------------------------------

OccupancyMap::OccupancyMap(double cell_cm, double origin_x, double origin_y)
    : OccupancyMap(cell_cm, origin_x, origin_y, 0, 0) {}

OccupancyMap::OccupancyMap(double cell_cm, double origin_x, double origin_y, int width, int height)
    : cell_cm_(cell_cm), origin_x_(origin_x), origin_y_(origin_y), width_(width), height_(height) {
  if (!(cell_cm > 0.0)) fail(ErrorKind::kDomain, "cell size must be positive");
  if (width < 0 || height < 0) fail(ErrorKind::kShape, "map dimensions must be non-negative");
  if ((width == 0) != (height == 0)) { width_ = height_ = 0; }
  cells_.assign(static_cast<std::size_t>(width_) * height_, 0);
}

std::size_t OccupancyMap::known_cells() const {
  return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(),
                                                [](std::uint8_t c) { return c != 0; }));
}

void OccupancyMap::ensure_contains(double min_x, double min_y, double max_x, double max_y) {
  auto lo = [&](double v, double o) {
    return static_cast<int>(std::floor((v - o) / cell_cm_ + kGridEps));
  };
  auto hi = [&](double v, double o) {
    return static_cast<int>(std::ceil((v - o) / cell_cm_ - kGridEps));
  };
  int i0 = lo(min_x, origin_x_);
  int j0 = lo(min_y, origin_y_);
  int i1 = std::max(hi(max_x, origin_x_), i0 + 1);
  int j1 = std::max(hi(max_y, origin_y_), j0 + 1);
  if (!empty()) {
    i0 = std::min(i0, 0);
    j0 = std::min(j0, 0);
    i1 = std::max(i1, width_);
    j1 = std::max(j1, height_);
    if (i0 == 0 && j0 == 0 && i1 == width_ && j1 == height_) return;
  }
  const int nw = i1 - i0;
  const int nh = j1 - j0;
  std::vector<std::uint8_t> grown(static_cast<std::size_t>(nw) * nh, 0);
  for (int j = 0; j < height_; ++j) {
    std::copy_n(cells_.begin() + static_cast<std::ptrdiff_t>(j) * width_, width_,
                grown.begin() + static_cast<std::ptrdiff_t>(j - j0) * nw - i0);
  }
  origin_x_ += i0 * cell_cm_;
  origin_y_ += j0 * cell_cm_;
  width_ = nw;
  height_ = nh;
  cells_ = std::move(grown);
}

void OccupancyMap::fuse(int i, int j, Cell observed) {
  auto& c = cells_[index(i, j)];
  if (observed == Cell::kOccupied) {
    c = static_cast<std::uint8_t>(Cell::kOccupied);
  } else if (observed == Cell::kFree && c == static_cast<std::uint8_t>(Cell::kUnknown)) {
    c = static_cast<std::uint8_t>(Cell::kFree);
  }
}

// --- stitching ----------------------------------------------------------------

void stitch_patch_inplace(OccupancyMap& map, const Pose& pose, const GroundPatch& patch) {
  patch.mask.validate();
  if (!(patch.width_cm > 0.0) || !(patch.depth_cm > 0.0) || !(patch.offset_cm > 0.0)) {
    fail(ErrorKind::kDomain, "patch extent and offset must be positive");
  }
  const int cols = patch.mask.width;
  const int rows = patch.mask.height;
  if (cols < 1 || rows < 1) fail(ErrorKind::kShape, "patch mask is empty");

  const double c = cos_deg(pose.theta_deg);
  const double s = sin_deg(pose.theta_deg);
  const double half = patch.width_cm / 2.0;
  const double near = patch.offset_cm;
  const double far = patch.offset_cm + patch.depth_cm;

  double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
  for (double f : {near, far}) {
    for (double l : {-half, half}) {
      const double wx = pose.x + f * c - l * s;
      const double wy = pose.y + f * s + l * c;
      min_x = std::min(min_x, wx);
      max_x = std::max(max_x, wx);
      min_y = std::min(min_y, wy);
      max_y = std::max(max_y, wy);
    }
  }
  map.ensure_contains(min_x, min_y, max_x, max_y);

  const double cell = map.cell_cm();
  const int i0 = std::max(0, static_cast<int>(std::floor((min_x - map.origin_x()) / cell + kGridEps)));
  const int j0 = std::max(0, static_cast<int>(std::floor((min_y - map.origin_y()) / cell + kGridEps)));
  const int i1 = std::min(map.width(), static_cast<int>(std::ceil((max_x - map.origin_x()) / cell - kGridEps)));
  const int j1 = std::min(map.height(), static_cast<int>(std::ceil((max_y - map.origin_y()) / cell - kGridEps)));

  for (int j = j0; j < j1; ++j) {
    const double dy = map.origin_y() + (j + 0.5) * cell - pose.y;
    for (int i = i0; i < i1; ++i) {
      const double dx = map.origin_x() + (i + 0.5) * cell - pose.x;
      const double forward = dx * c + dy * s;
      const double lateral = -dx * s + dy * c;
      const double fv = std::floor((forward - near) / patch.depth_cm * rows);
      const double fu = std::floor((half - lateral) / patch.width_cm * cols);
      if (fv < 0 || fv >= rows || fu < 0 || fu >= cols) continue;
      const int v = rows - 1 - static_cast<int>(fv);
      const int u = static_cast<int>(fu);
      map.fuse(i, j, patch.mask.at(u, v) == 0 ? Cell::kFree : Cell::kOccupied);
    }
  }
}

OccupancyMap stitch_patch(const OccupancyMap& map, const Pose& pose, const GroundPatch& patch) {
  OccupancyMap out = map;
  stitch_patch_inplace(out, pose, patch);
  return out;
}

// --- localization ---------------------------------------------------------------

namespace {

Raster wall_edges(const OccupancyMap& map) {
  Raster edges(map.width(), map.height(), 1, 0);
  auto occupied = [&](int i, int j) {
    return i >= 0 && j >= 0 && i < map.width() && j < map.height() && map.at(i, j) == Cell::kOccupied;
  };
  for (int j = 0; j < map.height(); ++j) {
    for (int i = 0; i < map.width(); ++i) {
      if (!occupied(i, j)) continue;
      if (!occupied(i - 1, j) || !occupied(i + 1, j) || !occupied(i, j - 1) || !occupied(i, j + 1)) {
        edges.at(i, j) = 255;
      }
    }
  }
  return edges;
}

std::vector<int> wall_angles(const OccupancyMap& map, const LocalizeConfig& cfg) {
  if (map.empty()) return {};
  const auto lines = geometry::hough_lines(wall_edges(map), cfg.wall_min_votes);
  std::vector<int> out;
  for (const auto& l : lines) {
    if (static_cast<int>(out.size()) >= cfg.wall_peaks) break;
    out.push_back(static_cast<int>(std::lround(l.theta_deg)) % 180);
  }
  return out;
}

struct Candidate {
  Pose pose;
  std::uint64_t match = 0;
  std::uint64_t overlap = 0;
  bool valid = false;
};

// Higher score, then larger overlap, then the lexicographically smaller pose.
bool better(const Candidate& a, const Candidate& b) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  const auto lhs = static_cast<unsigned __int128>(a.match) * b.overlap;
  const auto rhs = static_cast<unsigned __int128>(b.match) * a.overlap;
  if (lhs != rhs) return lhs > rhs;
  if (a.overlap != b.overlap) return a.overlap > b.overlap;
  if (a.pose.x != b.pose.x) return a.pose.x < b.pose.x;
  if (a.pose.y != b.pose.y) return a.pose.y < b.pose.y;
  return a.pose.theta_deg < b.pose.theta_deg;
}

Candidate scan_translations(const OccupancyMap& global, const OccupancyMap& rotated, int theta,
                            std::size_t min_known) {
  const auto& k = simd::active_kernels();
  const int gw = global.width();
  const int gh = global.height();
  const int rw = rotated.width();
  const int rh = rotated.height();
  const double cell = global.cell_cm();
  Candidate best;
  for (int sy = -rh + 1; sy < gh; ++sy) {
    const int b0 = std::max(0, -sy);
    const int b1 = std::min(rh, gh - sy);
    for (int sx = -rw + 1; sx < gw; ++sx) {
      const int a0 = std::max(0, -sx);
      const int a1 = std::min(rw, gw - sx);
      if (static_cast<std::size_t>(a1 - a0) * (b1 - b0) < min_known) continue;
      std::uint64_t match = 0;
      std::uint64_t overlap = 0;
      for (int b = b0; b < b1; ++b) {
        k.match_count(rotated.row(b).data() + a0, global.row(b + sy).data() + a0 + sx,
                      static_cast<std::size_t>(a1 - a0), &match, &overlap);
      }
      if (overlap < min_known) continue;
      Candidate c;
      c.valid = true;
      c.match = match;
      c.overlap = overlap;
      c.pose.x = global.origin_x() + sx * cell - rotated.origin_x();
      c.pose.y = global.origin_y() + sy * cell - rotated.origin_y();
      c.pose.theta_deg = theta;
      if (better(c, best)) best = c;
    }
  }
  return best;
}

}  // namespace

OccupancyMap rotate_map(const OccupancyMap& partial, int theta_deg) {
  const double cell = partial.cell_cm();
  const double c = cos_deg(theta_deg);
  const double s = sin_deg(theta_deg);
  const double x0 = partial.origin_x();
  const double y0 = partial.origin_y();
  const double x1 = x0 + partial.width() * cell;
  const double y1 = y0 + partial.height() * cell;
  double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
  for (double x : {x0, x1}) {
    for (double y : {y0, y1}) {
      const double rx = x * c - y * s;
      const double ry = x * s + y * c;
      min_x = std::min(min_x, rx);
      max_x = std::max(max_x, rx);
      min_y = std::min(min_y, ry);
      max_y = std::max(max_y, ry);
    }
  }
  const int a0 = static_cast<int>(std::floor(min_x / cell + kGridEps));
  const int b0 = static_cast<int>(std::floor(min_y / cell + kGridEps));
  const int a1 = std::max(a0 + 1, static_cast<int>(std::ceil(max_x / cell - kGridEps)));
  const int b1 = std::max(b0 + 1, static_cast<int>(std::ceil(max_y / cell - kGridEps)));

  OccupancyMap out(cell, a0 * cell, b0 * cell, a1 - a0, b1 - b0);
  for (int b = 0; b < out.height(); ++b) {
    const double qy = (b0 + b + 0.5) * cell;
    for (int a = 0; a < out.width(); ++a) {
      const double qx = (a0 + a + 0.5) * cell;
      const double px = qx * c + qy * s;
      const double py = -qx * s + qy * c;
      const double fi = std::floor((px - x0) / cell);
      const double fj = std::floor((py - y0) / cell);
      if (fi < 0 || fj < 0 || fi >= partial.width() || fj >= partial.height()) continue;
      out.set(a, b, partial.at(static_cast<int>(fi), static_cast<int>(fj)));
    }
  }
  return out;
}

std::vector<int> rotation_candidates(const OccupancyMap& global, const OccupancyMap& partial,
                                     const LocalizeConfig& cfg) {
  std::set<int> set{0, 90, 180, 270};
  const auto ga = wall_angles(global, cfg);
  const auto pa = wall_angles(partial, cfg);
  for (int g : ga) {
    for (int p : pa) {
      set.insert(static_cast<int>(normalize_deg(g - p)));
      set.insert(static_cast<int>(normalize_deg(g - p + 180)));
    }
  }
  return {set.begin(), set.end()};
}

Localization localize(const OccupancyMap& global, const OccupancyMap& partial,
                      const LocalizeConfig& cfg) {
  if (cfg.min_known < 1) fail(ErrorKind::kConfig, "min_known must be at least 1");
  if (cfg.min_score < 0.0 || cfg.min_score > 1.0) fail(ErrorKind::kConfig, "min_score must be in [0, 1]");
  if (global.cell_cm() != partial.cell_cm()) fail(ErrorKind::kShape, "maps use different cell sizes");
  const auto min_known = static_cast<std::size_t>(cfg.min_known);
  if (partial.known_cells() < min_known) {
    fail(ErrorKind::kInsufficientMapContent, "insufficient map content: partial map has " +
                                                 std::to_string(partial.known_cells()) +
                                                 " known cells");
  }
  if (global.known_cells() < min_known) {
    fail(ErrorKind::kInsufficientMapContent, "insufficient map content: global map has " +
                                                 std::to_string(global.known_cells()) +
                                                 " known cells");
  }

  const auto rotations = rotation_candidates(global, partial, cfg);
  std::vector<Candidate> per_rotation(rotations.size());
  {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, rotations.size());
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < rotations.size(); r += workers) {
          per_rotation[r] = scan_translations(global, rotate_map(partial, rotations[r]),
                                              rotations[r], min_known);
        }
      });
    }
  }
  Candidate best;
  for (const auto& c : per_rotation)
    if (better(c, best)) best = c;

  const double score = best.valid ? static_cast<double>(best.match) / best.overlap : 0.0;
  if (!best.valid || score < cfg.min_score) {
    fail(ErrorKind::kAmbiguousLocalization,
         "ambiguous localization: best score " + std::to_string(score) + " below " +
             std::to_string(cfg.min_score));
  }
  return {best.pose, score, best.overlap};
}

// --- exploration ----------------------------------------------------------------

ExploreState explore_step(const OccupancyMap& map, const Pose& pose, const Raster& frame,
                          const Motion& motion, const ExploreConfig& cfg) {
  GroundPatch patch;
  patch.mask = segmentation::segment_floor(frame, cfg.segmentation);
  patch.width_cm = cfg.patch_width_cm;
  patch.depth_cm = cfg.patch_depth_cm;
  patch.offset_cm = cfg.patch_offset_cm;
  ExploreState out{stitch_patch(map, pose, patch), {}};
  out.pose = advance_pose(pose, motion.forward_cm, motion.rotate_deg);
  return out;
}

// --- file format ----------------------------------------------------------------

Raster map_to_raster(const OccupancyMap& map) {
  if (map.empty()) fail(ErrorKind::kShape, "cannot render an empty map");
  Raster img(map.width(), map.height(), 1);
  for (int j = 0; j < map.height(); ++j) {
    for (int i = 0; i < map.width(); ++i) {
      std::uint8_t v = 128;
      if (map.at(i, j) == Cell::kFree) v = 255;
      if (map.at(i, j) == Cell::kOccupied) v = 0;
      img.at(i, j) = v;
    }
  }
  return img;
}

OccupancyMap raster_to_map(const Raster& img, double cell_cm, double origin_x, double origin_y) {
  if (img.channels() != 1) fail(ErrorKind::kShape, "map image must be grayscale");
  OccupancyMap map(cell_cm, origin_x, origin_y, img.width(), img.height());
  for (int j = 0; j < img.height(); ++j) {
    for (int i = 0; i < img.width(); ++i) {
      switch (img.at(i, j)) {
        case 128: break;
        case 255: map.set(i, j, Cell::kFree); break;
        case 0: map.set(i, j, Cell::kOccupied); break;
        default: fail(ErrorKind::kParse, "map cell value must be 0, 128 or 255");
      }
    }
  }
  return map;
}

std::vector<std::uint8_t> write_map(const OccupancyMap& map) {
  nlohmann::ordered_json header;
  header["cell_cm"] = map.cell_cm();
  header["origin"] = {map.origin_x(), map.origin_y()};
  header["width"] = map.width();
  header["height"] = map.height();
  const std::string line = header.dump() + "\n";
  std::vector<std::uint8_t> out(line.begin(), line.end());
  const auto body = write_pnm(map_to_raster(map));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

OccupancyMap read_map(std::span<const std::uint8_t> bytes) {
  const auto nl = std::find(bytes.begin(), bytes.end(), std::uint8_t{'\n'});
  if (nl == bytes.end()) fail(ErrorKind::kParse, "map file lacks a header line");
  const std::string line(bytes.begin(), nl);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("map header: ") + e.what());
  }
  double cell = 0.0;
  double ox = 0.0;
  double oy = 0.0;
  int w = 0;
  int h = 0;
  try {
    cell = header.at("cell_cm").get<double>();
    ox = header.at("origin").at(0).get<double>();
    oy = header.at("origin").at(1).get<double>();
    w = header.at("width").get<int>();
    h = header.at("height").get<int>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("map header: ") + e.what());
  }
  const auto img = read_pnm(bytes.subspan(static_cast<std::size_t>(nl - bytes.begin()) + 1));
  if (img.width() != w || img.height() != h) {
    fail(ErrorKind::kParse, "map header dimensions disagree with the image body");
  }
  return raster_to_map(img, cell, ox, oy);
}

}  // namespace autovis::mapping
