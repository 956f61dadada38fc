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

#include <vector>

#include "autovis/raster.hpp"

namespace autovis::geometry {

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned pixel rectangle; covers [x, x + w) x [y, y + h).
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int area() const { return w * h; }
  bool contains(Point p) const { return p.x >= x && p.y >= y && p.x < x + w && p.y < y + h; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

double iou(const Rect& a, const Rect& b);

/// x * cos(theta) + y * sin(theta) = rho, theta in degrees [0, 180).
struct HoughLine {
  double rho = 0.0;
  double theta_deg = 0.0;
  int votes = 0;  // edge pixels with |x cos + y sin - rho| <= 0.5
  friend bool operator==(const HoughLine&, const HoughLine&) = default;
};

/// Accumulator at 1 px / 1 degree. Each local peak (8-neighbourhood, votes >=
/// min_votes) is refined on its inlier pixels: the chord through the extreme
/// inliers when they form a digital straight segment of it, a total least
/// squares fit otherwise. Votes are recounted against the refined line.
/// Sorted by votes descending then (theta, rho) ascending.
std::vector<HoughLine> hough_lines(const Raster& edges, int min_votes);

/// Raw accumulator peaks (integral rho and theta) with rho measured from the
/// vertical line x = origin_x. Trig tables are mirror-exact, so a mirrored
/// image about origin_x yields the mirrored accumulator bit for bit.
std::vector<HoughLine> hough_lines_about(const Raster& edges, int min_votes, double origin_x);

/// Exact table values at whole degrees in [0, 180), libm elsewhere.
double hough_cos(double theta_deg);
double hough_sin(double theta_deg);

struct Contour {
  std::vector<Point> pixels;  // outer boundary, traced clockwise from the top-left pixel
  Rect bbox;
  int area = 0;         // pixels in the component
  int filled_area = 0;  // area plus enclosed holes
};

/// One contour per 8-connected component of non-zero pixels, largest first.
std::vector<Contour> find_contours(const Raster& mask);

struct RectangleConfig {
  int edge_threshold = 60;
  double min_fill_ratio = 0.85;
  int blur_passes = 1;
};

/// Area-largest rectangle-like outline in a calibration photo. The returned
/// box runs along the middle of the detected edge band, so it matches the
/// painted rectangle rather than its blurred halo.
Contour largest_rectangle(const Raster& img, const RectangleConfig& cfg = {});

struct Segment {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool valid = false;
};

struct Lane {
  Segment left;   // bottom end first
  Segment right;
};

struct LaneConfig {
  double horizon_frac = 0.6;    // top of the ROI as a fraction of height
  double top_width_frac = 0.2;  // width of the ROI top edge as a fraction of width
  int edge_threshold = 60;
  int min_votes = 20;
  int blur_passes = 1;
  int horizontal_reject_deg = 10;
  double refine_band_px = 6.0;  // least-squares refit half-width, 0 keeps the raw peak
};

/// Trapezoid keep-mask: full width at the bottom row, top_width centred at horizon_y.
Raster lane_roi_mask(int width, int height, const LaneConfig& cfg);

Lane detect_lane(const Raster& frame, const LaneConfig& cfg = {});

/// Burns line segments / rectangles into an image (red on RGB, white on gray).
void draw_segment(Raster& img, const Segment& s, int thickness = 2);
void draw_rect(Raster& img, const Rect& r, int border = 3);

}  // namespace autovis::geometry
