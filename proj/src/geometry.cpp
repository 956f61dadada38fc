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

#include "autovis/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "autovis/error.hpp"

namespace autovis::geometry {

double iou(const Rect& a, const Rect& b) {
  const int ix = std::max(0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const int iy = std::max(0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = static_cast<double>(ix) * iy;
  const double uni = static_cast<double>(a.area()) + b.area() - inter;
  return uni > 0 ? inter / uni : 0.0;
}

// --- Hough ------------------------------------------------------------------

namespace {

struct TrigTables {
  std::array<double, 180> cos{};
  std::array<double, 180> sin{};

  TrigTables() {
    for (int t = 0; t <= 90; ++t) {
      const double rad = t * std::numbers::pi / 180.0;
      cos[t] = t == 90 ? 0.0 : std::cos(rad);
      sin[t] = t == 0 ? 0.0 : std::sin(rad);
    }
    for (int t = 91; t < 180; ++t) {
      cos[t] = -cos[180 - t];
      sin[t] = sin[180 - t];
    }
  }
};

const TrigTables& trig() {
  static const TrigTables tables;
  return tables;
}

}  // namespace

double hough_cos(double theta_deg) {
  if (theta_deg >= 0 && theta_deg < 180 && theta_deg == std::floor(theta_deg)) {
    return trig().cos[static_cast<std::size_t>(theta_deg)];
  }
  return std::cos(theta_deg * std::numbers::pi / 180.0);
}

double hough_sin(double theta_deg) {
  if (theta_deg >= 0 && theta_deg < 180 && theta_deg == std::floor(theta_deg)) {
    return trig().sin[static_cast<std::size_t>(theta_deg)];
  }
  return std::sin(theta_deg * std::numbers::pi / 180.0);
}

std::vector<HoughLine> hough_lines_about(const Raster& edges, int min_votes, double origin_x) {
  if (edges.channels() != 1) fail(ErrorKind::kShape, "hough_lines expects a single-channel image");
  const auto& tab = trig();
  const double reach_x = std::max(std::abs(origin_x), std::abs(edges.width() - 1 - origin_x));
  const int max_rho = static_cast<int>(std::ceil(std::hypot(reach_x, edges.height() - 1.0))) + 1;
  const int n_rho = 2 * max_rho + 1;
  std::vector<int> acc(static_cast<std::size_t>(180) * n_rho, 0);
  auto cell = [&](int theta, int rho) -> int& {
    return acc[static_cast<std::size_t>(theta) * n_rho + rho + max_rho];
  };

  for (int y = 0; y < edges.height(); ++y) {
    for (int x = 0; x < edges.width(); ++x) {
      if (edges.at(x, y) == 0) continue;
      const double dx = x - origin_x;
      for (int t = 0; t < 180; ++t) {
        ++cell(t, static_cast<int>(std::round(dx * tab.cos[t] + y * tab.sin[t])));
      }
    }
  }

  // Neighbour lookup wraps theta: (theta + 180, rho) is the line (theta, -rho).
  auto votes_at = [&](int theta, int rho) {
    if (theta < 0) {
      theta += 180;
      rho = -rho;
    } else if (theta >= 180) {
      theta -= 180;
      rho = -rho;
    }
    if (rho < -max_rho || rho > max_rho) return 0;
    return cell(theta, rho);
  };

  std::vector<HoughLine> peaks;
  for (int t = 0; t < 180; ++t) {
    for (int r = -max_rho; r <= max_rho; ++r) {
      const int v = cell(t, r);
      if (v <= 0 || v < min_votes) continue;
      bool is_peak = true;
      for (int dt = -1; dt <= 1 && is_peak; ++dt) {
        for (int dr = -1; dr <= 1; ++dr) {
          if ((dt != 0 || dr != 0) && votes_at(t + dt, r + dr) > v) {
            is_peak = false;
            break;
          }
        }
      }
      if (is_peak) peaks.push_back({static_cast<double>(r), static_cast<double>(t), v});
    }
  }
  std::sort(peaks.begin(), peaks.end(), [](const HoughLine& a, const HoughLine& b) {
    if (a.votes != b.votes) return a.votes > b.votes;
    if (a.theta_deg != b.theta_deg) return a.theta_deg < b.theta_deg;
    return a.rho < b.rho;
  });
  return peaks;
}

namespace {

bool hough_less(const HoughLine& a, const HoughLine& b) {
  if (a.votes != b.votes) return a.votes > b.votes;
  if (a.theta_deg != b.theta_deg) return a.theta_deg < b.theta_deg;
  return a.rho < b.rho;
}

// Normal form of the line through p with direction (dx, dy).
HoughLine line_through(double px, double py, double dx, double dy) {
  double theta;
  if (dx == 0) {
    theta = 0.0;
  } else if (dy == 0) {
    theta = 90.0;
  } else {
    theta = std::atan2(dx, -dy) * 180.0 / std::numbers::pi;
    if (theta < 0) theta += 180.0;
    if (theta >= 180.0) theta -= 180.0;
  }
  HoughLine l;
  l.theta_deg = theta;
  l.rho = px * hough_cos(theta) + py * hough_sin(theta);
  return l;
}

int count_votes(const std::vector<Point>& px, double rho, double theta) {
  const double c = hough_cos(theta);
  const double s = hough_sin(theta);
  int n = 0;
  for (const auto& p : px) n += std::abs(p.x * c + p.y * s - rho) <= 0.5;
  return n;
}

std::vector<Point> inliers(const std::vector<Point>& px, double rho, double theta, double band) {
  const double c = hough_cos(theta);
  const double s = hough_sin(theta);
  std::vector<Point> out;
  for (const auto& p : px) {
    if (std::abs(p.x * c + p.y * s - rho) <= band) out.push_back(p);
  }
  return out;
}

// Total least squares line; false if the points are a single location.
bool tls_fit(const std::vector<Point>& pts, HoughLine& out) {
  if (pts.size() < 2) return false;
  double mx = 0, my = 0;
  for (const auto& p : pts) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0, syy = 0, sxy = 0;
  for (const auto& p : pts) {
    sxx += (p.x - mx) * (p.x - mx);
    syy += (p.y - my) * (p.y - my);
    sxy += (p.x - mx) * (p.y - my);
  }
  if (sxx == 0 && syy == 0) return false;
  const double phi = 0.5 * std::atan2(2 * sxy, sxx - syy);  // major axis
  double dx = std::cos(phi), dy = std::sin(phi);
  if (sxy == 0) {
    dx = sxx >= syy ? 1.0 : 0.0;
    dy = sxx >= syy ? 0.0 : 1.0;
  }
  out = line_through(mx, my, dx, dy);
  return true;
}

HoughLine refine_peak(const std::vector<Point>& px, const HoughLine& raw) {
  HoughLine fit;
  if (!tls_fit(inliers(px, raw.rho, raw.theta_deg, 2.0), fit)) return raw;
  auto pts = inliers(px, fit.rho, fit.theta_deg, 1.0);
  if (!tls_fit(pts, fit)) return raw;

  // Extreme inliers along the fitted direction.
  const double ux = -hough_sin(fit.theta_deg), uy = hough_cos(fit.theta_deg);
  Point a = pts.front(), b = pts.front();
  double lo = a.x * ux + a.y * uy, hi = lo;
  for (const auto& p : pts) {
    const double u = p.x * ux + p.y * uy;
    if (u < lo) {
      lo = u;
      a = p;
    }
    if (u > hi) {
      hi = u;
      b = p;
    }
  }
  HoughLine out = fit;
  if (!(a == b)) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len = std::hypot(dx, dy);
    bool digital = true;
    for (const auto& p : pts) {
      if (std::abs((p.x - a.x) * dy - (p.y - a.y) * dx) / len > 0.5 * std::max(std::abs(dx), std::abs(dy)) / len + 1e-9) {
        digital = false;
        break;
      }
    }
    if (digital) out = line_through(a.x, a.y, dx, dy);
  }
  out.votes = count_votes(px, out.rho, out.theta_deg);
  return out;
}

}  // namespace

std::vector<HoughLine> hough_lines(const Raster& edges, int min_votes) {
  const auto peaks = hough_lines_about(edges, min_votes, 0.0);
  if (peaks.empty()) return peaks;
  std::vector<Point> px;
  for (int y = 0; y < edges.height(); ++y)
    for (int x = 0; x < edges.width(); ++x)
      if (edges.at(x, y) != 0) px.push_back({x, y});

  std::vector<HoughLine> out;
  out.reserve(peaks.size());
  for (const auto& p : peaks) out.push_back(refine_peak(px, p));
  std::sort(out.begin(), out.end(), hough_less);
  out.erase(std::unique(out.begin(), out.end(),
                        [](const HoughLine& a, const HoughLine& b) {
                          return a.rho == b.rho && a.theta_deg == b.theta_deg;
                        }),
            out.end());
  return out;
}

// --- contours ---------------------------------------------------------------

namespace {

constexpr std::array<Point, 8> kClockwise = {
    Point{-1, 0}, Point{-1, -1}, Point{0, -1}, Point{1, -1},
    Point{1, 0},  Point{1, 1},   Point{0, 1},  Point{-1, 1}};

int direction_between(Point from, Point to) {
  for (int d = 0; d < 8; ++d) {
    if (from.x + kClockwise[d].x == to.x && from.y + kClockwise[d].y == to.y) return d;
  }
  return 0;
}

// Moore-neighbour tracing; stops when the walk leaves the start pixel the
// same way it first did.
template <typename IsMember>
std::vector<Point> trace_boundary(Point start, int area, IsMember member) {
  std::vector<Point> out{start};
  Point current = start;
  int back = 0;  // start is the first pixel in raster order, so its west side is background
  const std::size_t guard = 4 * static_cast<std::size_t>(area) + 16;
  while (out.size() <= guard) {
    int found = -1;
    for (int i = 1; i <= 8; ++i) {
      const int d = (back + i) % 8;
      if (member(Point{current.x + kClockwise[d].x, current.y + kClockwise[d].y})) {
        found = d;
        break;
      }
    }
    if (found < 0) break;
    const Point next{current.x + kClockwise[found].x, current.y + kClockwise[found].y};
    if (current == start && out.size() > 1 && next == out[1]) break;
    const int pd = (found + 7) % 8;
    const Point prev{current.x + kClockwise[pd].x, current.y + kClockwise[pd].y};
    current = next;
    back = direction_between(current, prev);
    out.push_back(current);
  }
  if (out.size() > 1 && out.back() == start) out.pop_back();
  return out;
}

}  // namespace

std::vector<Contour> find_contours(const Raster& mask) {
  if (mask.channels() != 1) fail(ErrorKind::kShape, "find_contours expects a single-channel mask");
  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> comp(static_cast<std::size_t>(w) * h, -1);
  std::vector<Contour> contours;
  std::vector<Point> stack;

  for (int sy = 0; sy < h; ++sy) {
    for (int sx = 0; sx < w; ++sx) {
      if (mask.at(sx, sy) == 0 || comp[static_cast<std::size_t>(sy) * w + sx] >= 0) continue;
      const int id = static_cast<int>(contours.size());
      Contour c;
      int x0 = sx, x1 = sx, y0 = sy, y1 = sy;
      comp[static_cast<std::size_t>(sy) * w + sx] = id;
      stack.push_back({sx, sy});
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        ++c.area;
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
        for (const Point d : kClockwise) {
          const int nx = p.x + d.x;
          const int ny = p.y + d.y;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
          if (mask.at(nx, ny) != 0 && comp[ni] < 0) {
            comp[ni] = id;
            stack.push_back({nx, ny});
          }
        }
      }
      c.bbox = {x0, y0, x1 - x0 + 1, y1 - y0 + 1};

      auto member = [&](Point p) {
        return p.x >= 0 && p.y >= 0 && p.x < w && p.y < h &&
               comp[static_cast<std::size_t>(p.y) * w + p.x] == id;
      };
      c.pixels = trace_boundary({sx, sy}, c.area, member);

      // Holes: cells of the bbox (padded by one) not 4-reachable from outside.
      const int pw = c.bbox.w + 2;
      const int ph = c.bbox.h + 2;
      std::vector<std::uint8_t> outside(static_cast<std::size_t>(pw) * ph, 0);
      std::vector<Point> flood{{0, 0}};
      outside[0] = 1;
      int reached = 0;
      while (!flood.empty()) {
        const Point p = flood.back();
        flood.pop_back();
        ++reached;
        constexpr std::array<Point, 4> k4 = {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}};
        for (const Point d : k4) {
          const int nx = p.x + d.x;
          const int ny = p.y + d.y;
          if (nx < 0 || ny < 0 || nx >= pw || ny >= ph) continue;
          const std::size_t ni = static_cast<std::size_t>(ny) * pw + nx;
          if (outside[ni] || member({x0 + nx - 1, y0 + ny - 1})) continue;
          outside[ni] = 1;
          flood.push_back({nx, ny});
        }
      }
      c.filled_area = pw * ph - reached;
      contours.push_back(std::move(c));
    }
  }
  std::stable_sort(contours.begin(), contours.end(),
                   [](const Contour& a, const Contour& b) { return a.area > b.area; });
  return contours;
}

namespace {

// Interior pixels of `outer` that are neither part of the component nor
// 4-connected to the outside, i.e. the holes; returns their bounding box.
bool hole_bbox(const Raster& edges, const Contour& c, Rect* out) {
  const Rect& b = c.bbox;
  const int pw = b.w + 2;
  const int ph = b.h + 2;
  auto is_edge = [&](int px, int py) {
    const int x = b.x + px - 1;
    const int y = b.y + py - 1;
    return x >= 0 && y >= 0 && x < edges.width() && y < edges.height() && edges.at(x, y) != 0;
  };
  std::vector<std::uint8_t> outside(static_cast<std::size_t>(pw) * ph, 0);
  std::vector<Point> flood{{0, 0}};
  outside[0] = 1;
  while (!flood.empty()) {
    const Point p = flood.back();
    flood.pop_back();
    constexpr std::array<Point, 4> k4 = {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}};
    for (const Point d : k4) {
      const int nx = p.x + d.x;
      const int ny = p.y + d.y;
      if (nx < 0 || ny < 0 || nx >= pw || ny >= ph) continue;
      const std::size_t ni = static_cast<std::size_t>(ny) * pw + nx;
      if (outside[ni] || is_edge(nx, ny)) continue;
      outside[ni] = 1;
      flood.push_back({nx, ny});
    }
  }
  int x0 = pw, y0 = ph, x1 = -1, y1 = -1;
  for (int py = 0; py < ph; ++py) {
    for (int px = 0; px < pw; ++px) {
      if (outside[static_cast<std::size_t>(py) * pw + px] || is_edge(px, py)) continue;
      x0 = std::min(x0, px);
      x1 = std::max(x1, px);
      y0 = std::min(y0, py);
      y1 = std::max(y1, py);
    }
  }
  if (x1 < 0) return false;
  *out = {b.x + x0 - 1, b.y + y0 - 1, x1 - x0 + 1, y1 - y0 + 1};
  return true;
}

std::vector<Point> rect_perimeter(const Rect& r) {
  std::vector<Point> pts;
  const int x1 = r.x + r.w - 1;
  const int y1 = r.y + r.h - 1;
  for (int x = r.x; x <= x1; ++x) pts.push_back({x, r.y});
  for (int y = r.y + 1; y <= y1; ++y) pts.push_back({x1, y});
  if (r.h > 1)
    for (int x = x1 - 1; x >= r.x; --x) pts.push_back({x, y1});
  if (r.w > 1)
    for (int y = y1 - 1; y > r.y; --y) pts.push_back({r.x, y});
  return pts;
}

}  // namespace

Contour largest_rectangle(const Raster& img, const RectangleConfig& cfg) {
  const Raster edges = threshold_binary(
      sobel_magnitude(gaussian_blur(ensure_gray(img), cfg.blur_passes)), cfg.edge_threshold);
  const auto contours = find_contours(edges);
  const Contour* best = nullptr;
  for (const auto& c : contours) {
    const double fill = static_cast<double>(c.filled_area) / c.bbox.area();
    if (fill < cfg.min_fill_ratio) continue;
    if (best == nullptr || c.filled_area > best->filled_area) best = &c;
  }
  if (best == nullptr) fail(ErrorKind::kNoRectangle, "no rectangle found");

  Rect inner;
  if (!hole_bbox(edges, *best, &inner)) return *best;
  const Rect& outer = best->bbox;
  auto mid = [](int a, int b) { return static_cast<int>(std::lround((a + b) / 2.0)); };
  const int left = mid(outer.x, inner.x);
  const int top = mid(outer.y, inner.y);
  const int right = mid(outer.x + outer.w - 1, inner.x + inner.w - 1);
  const int bottom = mid(outer.y + outer.h - 1, inner.y + inner.h - 1);
  Contour out;
  out.bbox = {left, top, right - left + 1, bottom - top + 1};
  out.pixels = rect_perimeter(out.bbox);
  out.area = out.bbox.area();
  out.filled_area = out.area;
  return out;
}

// --- lanes ------------------------------------------------------------------

namespace {

int horizon_row(int height, const LaneConfig& cfg) {
  return std::clamp(static_cast<int>(std::floor(cfg.horizon_frac * height)), 0, height - 1);
}

// Half-width of the ROI trapezoid on row y (y at or below the horizon).
double roi_half_width(int width, int height, const LaneConfig& cfg, int y) {
  const int hy = horizon_row(height, cfg);
  const double top_half = cfg.top_width_frac * width / 2.0;
  const double bottom_half = width / 2.0;
  const int span = height - 1 - hy;
  const double t = span > 0 ? static_cast<double>(y - hy) / span : 1.0;
  return top_half + t * (bottom_half - top_half);
}

}  // namespace

Raster lane_roi_mask(int width, int height, const LaneConfig& cfg) {
  if (!(cfg.horizon_frac >= 0.0 && cfg.horizon_frac < 1.0) ||
      !(cfg.top_width_frac >= 0.0 && cfg.top_width_frac <= 1.0)) {
    fail(ErrorKind::kConfig, "lane ROI fractions out of range");
  }
  Raster mask(width, height, 1);
  const int hy = horizon_row(height, cfg);
  const double cx = (width - 1) / 2.0;
  for (int y = hy; y < height; ++y) {
    const double half = roi_half_width(width, height, cfg, y);
    for (int x = 0; x < width; ++x) {
      if (std::abs(x - cx) <= half) mask.at(x, y) = 255;
    }
  }
  return mask;
}

namespace {

// Least-squares refit of x = a*y + b over edge pixels within band px
// (horizontally) of the current line. A painted stripe yields two parallel
// Sobel edges; the peak sits on one of them, the fit lands between.
// Coordinates are relative to cx so every sum is a multiple of 1/4 and
// exact in double, which keeps the result mirror-exact.
// Rows where the band pokes out of the ROI are skipped: the mask would cut
// one edge of the stripe and drag the fit sideways.
void refine_lane_fit(const Raster& edges, const LaneConfig& cfg, double cx, double& a, double& b) {
  const double band = cfg.refine_band_px;
  if (band <= 0) return;
  const int hy = horizon_row(edges.height(), cfg);
  for (int pass = 0; pass < 3; ++pass) {
    double n = 0, sy = 0, syy = 0, sx = 0, sxy = 0;
    for (int y = hy; y < edges.height(); ++y) {
      const std::uint8_t* row = edges.data().data() + static_cast<std::size_t>(y) * edges.width();
      const double centre = a * y + b;
      const double reach = std::abs(centre) + band;
      if (reach > cx || reach > roi_half_width(edges.width(), edges.height(), cfg, y)) continue;
      const int lo = std::max(0, static_cast<int>(std::floor(cx + centre - band)));
      const int hi = std::min(edges.width() - 1, static_cast<int>(std::ceil(cx + centre + band)));
      for (int x = lo; x <= hi; ++x) {
        if (row[x] == 0) continue;
        const double xr = x - cx;
        if (std::abs(xr - centre) > band) continue;
        n += 1;
        sy += y;
        syy += static_cast<double>(y) * y;
        sx += xr;
        sxy += xr * y;
      }
    }
    const double den = n * syy - sy * sy;
    if (n < 2 || den <= 0) return;
    a = (n * sxy - sx * sy) / den;
    b = (sx * syy - sy * sxy) / den;
  }
}

}  // namespace

Lane detect_lane(const Raster& frame, const LaneConfig& cfg) {
  const int w = frame.width();
  const int h = frame.height();
  Raster edges = threshold_binary(
      sobel_magnitude(gaussian_blur(ensure_gray(frame), cfg.blur_passes)), cfg.edge_threshold);
  const Raster roi = lane_roi_mask(w, h, cfg);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (roi.data()[i] == 0) edges.data()[i] = 0;
  }

  const double cx = (w - 1) / 2.0;
  const auto lines = hough_lines_about(edges, cfg.min_votes, cx);

  // theta in (0, 90) gives a negative image slope (left lane), (90, 180) positive.
  const HoughLine* left = nullptr;
  const HoughLine* right = nullptr;
  for (const auto& l : lines) {
    if (l.theta_deg == 0 || std::abs(l.theta_deg - 90) < cfg.horizontal_reject_deg) continue;
    if (l.theta_deg < 90) {
      if (left == nullptr || l.votes > left->votes ||
          (l.votes == left->votes &&
           (l.theta_deg < left->theta_deg ||
            (l.theta_deg == left->theta_deg && l.rho < left->rho)))) {
        left = &l;
      }
    } else {
      // Mirror image of the left rule: ties prefer larger theta.
      if (right == nullptr || l.votes > right->votes ||
          (l.votes == right->votes &&
           (l.theta_deg > right->theta_deg ||
            (l.theta_deg == right->theta_deg && l.rho < right->rho)))) {
        right = &l;
      }
    }
  }

  const int hy = horizon_row(h, cfg);
  auto clip = [&](const HoughLine* l) {
    Segment s;
    if (l == nullptr) return s;
    const double c = hough_cos(l->theta_deg);
    const double sn = hough_sin(l->theta_deg);
    // x - cx = a * y + b, seeded from the peak.
    double a = -sn / c;
    double b = l->rho / c;
    refine_lane_fit(edges, cfg, cx, a, b);
    // Snapped to 1/256 px about the centre so that mirroring the frame
    // mirrors the endpoints bit for bit.
    auto x_at = [&](double y) { return cx + std::round((a * y + b) * 256.0) / 256.0; };
    s.x0 = x_at(h - 1);
    s.y0 = h - 1;
    s.x1 = x_at(hy);
    s.y1 = hy;
    s.valid = true;
    return s;
  };
  return Lane{clip(left), clip(right)};
}

// --- drawing ----------------------------------------------------------------

namespace {

void paint(Raster& img, int x, int y) {
  if (!img.contains(x, y)) return;
  if (img.channels() == 3) {
    img.at(x, y, 0) = 255;
    img.at(x, y, 1) = 0;
    img.at(x, y, 2) = 0;
  } else {
    img.at(x, y) = 255;
  }
}

}  // namespace

void draw_segment(Raster& img, const Segment& s, int thickness) {
  if (!s.valid) return;
  const double len = std::hypot(s.x1 - s.x0, s.y1 - s.y0);
  const int steps = std::max(1, static_cast<int>(std::ceil(len * 2)));
  const int r = std::max(0, thickness / 2);
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    const int x = static_cast<int>(std::lround(s.x0 + t * (s.x1 - s.x0)));
    const int y = static_cast<int>(std::lround(s.y0 + t * (s.y1 - s.y0)));
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx) paint(img, x + dx, y + dy);
  }
}

void draw_rect(Raster& img, const Rect& r, int border) {
  for (int y = r.y; y < r.y + r.h; ++y) {
    for (int x = r.x; x < r.x + r.w; ++x) {
      const bool on_border = x < r.x + border || y < r.y + border || x >= r.x + r.w - border ||
                             y >= r.y + r.h - border;
      if (on_border) paint(img, x, y);
    }
  }
}

}  // namespace autovis::geometry
