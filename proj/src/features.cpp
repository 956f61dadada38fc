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

#include "autovis/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "autovis/error.hpp"

namespace autovis::features {

void HogParams::validate() const {
  if (cell_px < 2) fail(ErrorKind::kConfig, "HOG cell size must be at least 2");
  if (bins < 2) fail(ErrorKind::kConfig, "HOG needs at least 2 orientation bins");
  if (block_cells < 1) fail(ErrorKind::kConfig, "HOG block must span at least one cell");
}

void FeatureConfig::validate() const {
  hog.validate();
  if (patch_px < 1 || patch_px % hog.cell_px != 0 || patch_px / hog.cell_px < hog.block_cells) {
    fail(ErrorKind::kConfig, "patch size must be a positive multiple of the HOG cell covering a block");
  }
  if (hist_bins < 1 || hist_bins > 256) fail(ErrorKind::kConfig, "histogram bins must be in 1..256");
  if (spatial_px < 1) fail(ErrorKind::kConfig, "spatial size must be positive");
}

std::size_t hog_length(int width, int height, const HogParams& p) {
  const int bx = width / p.cell_px - p.block_cells + 1;
  const int by = height / p.cell_px - p.block_cells + 1;
  if (bx < 1 || by < 1) return 0;
  return static_cast<std::size_t>(bx) * by * p.block_cells * p.block_cells * p.bins;
}

FeatureLayout make_layout(const FeatureConfig& cfg, int channels) {
  cfg.validate();
  if (channels != 1 && channels != 3) fail(ErrorKind::kShape, "patches must have 1 or 3 channels");
  FeatureLayout layout;
  layout.channels = channels;
  layout.config = cfg;
  const std::size_t hog_planes = cfg.hog_all_channels ? channels : 1;
  layout.hog = {0, hog_planes * hog_length(cfg.patch_px, cfg.patch_px, cfg.hog)};
  layout.color_hist = {layout.hog.length, static_cast<std::size_t>(cfg.hist_bins) * channels};
  layout.spatial = {layout.color_hist.offset + layout.color_hist.length,
                    static_cast<std::size_t>(cfg.spatial_px) * cfg.spatial_px * channels};
  layout.total = layout.spatial.offset + layout.spatial.length;
  return layout;
}

// --- HOG --------------------------------------------------------------------

namespace {

struct Vote {
  int b0 = 0;
  int b1 = 0;
  double w0 = 0.0;
  double w1 = 0.0;
};

Vote orientation_vote(int gx, int gy, int bins) {
  const double mag = std::sqrt(static_cast<double>(gx * gx + gy * gy));
  if (mag == 0.0) return {};
  double angle = std::atan2(static_cast<double>(gy), static_cast<double>(gx)) * 180.0 /
                 std::numbers::pi;
  if (angle < 0.0) angle += 180.0;
  if (angle >= 180.0) angle -= 180.0;
  const double pos = angle / (180.0 / bins) - 0.5;
  const double lower = std::floor(pos);
  const double frac = pos - lower;
  const int b0 = (static_cast<int>(lower) + bins) % bins;
  return {b0, (b0 + 1) % bins, mag * (1.0 - frac), mag * frac};
}

void l2_hys(std::span<double> block) {
  auto normalize = [&] {
    double ss = 0.0;
    for (double v : block) ss += v * v;
    const double norm = std::sqrt(ss + kHogEpsilon * kHogEpsilon);
    for (double& v : block) v /= norm;
  };
  normalize();
  for (double& v : block) v = std::min(v, kHogClip);
  normalize();
}

}  // namespace

HogCellGrid::HogCellGrid(const Raster& plane, const HogParams& p) : params_(p) {
  p.validate();
  if (plane.channels() != 1) fail(ErrorKind::kShape, "HOG runs on single-channel planes");
  const int cell = p.cell_px;
  const int w = plane.width();
  const int h = plane.height();
  cells_x_ = w / cell;
  cells_y_ = h / cell;
  hist_.assign(16 * static_cast<std::size_t>(cells_x_) * cells_y_ * p.bins, 0.0);

  auto gradient_vote = [&](int x, int y, int clamp, int x0, int y0) {
    const int xl = ((clamp & kClampLeft) && x == x0) ? x : std::max(x - 1, 0);
    const int xr = ((clamp & kClampRight) && x == x0 + cell - 1) ? x : std::min(x + 1, w - 1);
    const int yt = ((clamp & kClampTop) && y == y0) ? y : std::max(y - 1, 0);
    const int yb = ((clamp & kClampBottom) && y == y0 + cell - 1) ? y : std::min(y + 1, h - 1);
    return orientation_vote(plane.at(xr, y) - plane.at(xl, y), plane.at(x, yb) - plane.at(x, yt),
                            p.bins);
  };

  std::vector<Vote> interior(static_cast<std::size_t>(cell) * cell);
  for (int cy = 0; cy < cells_y_; ++cy) {
    for (int cx = 0; cx < cells_x_; ++cx) {
      const int x0 = cx * cell;
      const int y0 = cy * cell;
      for (int py = 0; py < cell; ++py)
        for (int px = 0; px < cell; ++px)
          interior[py * cell + px] = gradient_vote(x0 + px, y0 + py, 0, x0, y0);

      for (int variant = 0; variant < 16; ++variant) {
        double* hist = hist_.data() +
                       ((static_cast<std::size_t>(variant) * cells_y_ + cy) * cells_x_ + cx) * p.bins;
        for (int py = 0; py < cell; ++py) {
          for (int px = 0; px < cell; ++px) {
            const int edge = (px == 0 ? kClampLeft : 0) | (px == cell - 1 ? kClampRight : 0) |
                             (py == 0 ? kClampTop : 0) | (py == cell - 1 ? kClampBottom : 0);
            const int clamp = variant & edge;
            const Vote v = clamp == 0 ? interior[py * cell + px]
                                      : gradient_vote(x0 + px, y0 + py, clamp, x0, y0);
            hist[v.b0] += v.w0;
            hist[v.b1] += v.w1;
          }
        }
      }
    }
  }
}

std::span<const double> HogCellGrid::cell(int variant, int cx, int cy) const {
  const std::size_t at =
      ((static_cast<std::size_t>(variant) * cells_y_ + cy) * cells_x_ + cx) * params_.bins;
  return std::span<const double>(hist_).subspan(at, params_.bins);
}

void HogCellGrid::append_window(int cx0, int cy0, int ncx, int ncy, std::vector<double>& out) const {
  const int bc = params_.block_cells;
  if (cx0 < 0 || cy0 < 0 || cx0 + ncx > cells_x_ || cy0 + ncy > cells_y_ || ncx < bc || ncy < bc) {
    fail(ErrorKind::kShape, "HOG window outside the cell grid");
  }
  std::vector<double> block(static_cast<std::size_t>(bc) * bc * params_.bins);
  for (int by = 0; by + bc <= ncy; ++by) {
    for (int bx = 0; bx + bc <= ncx; ++bx) {
      auto dst = block.begin();
      for (int j = 0; j < bc; ++j) {
        for (int i = 0; i < bc; ++i) {
          const int cx = cx0 + bx + i;
          const int cy = cy0 + by + j;
          const int variant = (cx == cx0 ? kClampLeft : 0) | (cx == cx0 + ncx - 1 ? kClampRight : 0) |
                              (cy == cy0 ? kClampTop : 0) | (cy == cy0 + ncy - 1 ? kClampBottom : 0);
          const auto h = cell(variant, cx, cy);
          dst = std::copy(h.begin(), h.end(), dst);
        }
      }
      l2_hys(block);
      out.insert(out.end(), block.begin(), block.end());
    }
  }
}

std::vector<double> hog(const Raster& patch, const HogParams& p) {
  p.validate();
  if (patch.channels() != 1) fail(ErrorKind::kShape, "hog expects a single-channel patch");
  if (patch.width() % p.cell_px != 0 || patch.height() % p.cell_px != 0) {
    fail(ErrorKind::kShape, "patch dimensions must be divisible by the cell size");
  }
  if (hog_length(patch.width(), patch.height(), p) == 0) {
    fail(ErrorKind::kShape, "patch smaller than one HOG block");
  }
  const HogCellGrid grid(patch, p);
  std::vector<double> out;
  out.reserve(hog_length(patch.width(), patch.height(), p));
  grid.append_window(0, 0, grid.cells_x(), grid.cells_y(), out);
  return out;
}

// --- colour / spatial -------------------------------------------------------

std::vector<double> color_histogram(const Raster& patch, int bins) {
  if (bins < 1 || bins > 256) fail(ErrorKind::kDomain, "histogram bins must be in 1..256");
  const int ch = patch.channels();
  std::vector<double> out(static_cast<std::size_t>(bins) * ch, 0.0);
  const auto data = patch.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int c = static_cast<int>(i % ch);
    out[static_cast<std::size_t>(c) * bins + data[i] * bins / 256] += 1.0;
  }
  return out;
}

std::vector<double> spatial_features(const Raster& patch, int size) {
  return resample_bilinear(patch, size, size);
}

std::vector<Raster> hog_planes(const Raster& patch, const FeatureConfig& cfg) {
  if (patch.channels() == 1 || !cfg.hog_all_channels) return {ensure_gray(patch)};
  std::vector<Raster> planes;
  for (int c = 0; c < patch.channels(); ++c) {
    Raster plane(patch.width(), patch.height(), 1);
    for (int y = 0; y < patch.height(); ++y)
      for (int x = 0; x < patch.width(); ++x) plane.at(x, y) = patch.at(x, y, c);
    planes.push_back(std::move(plane));
  }
  return planes;
}

void append_color_and_spatial(const Raster& patch, const FeatureConfig& cfg,
                              std::vector<double>& out) {
  const auto hist = color_histogram(patch, cfg.hist_bins);
  out.insert(out.end(), hist.begin(), hist.end());
  const auto spatial = spatial_features(patch, cfg.spatial_px);
  out.insert(out.end(), spatial.begin(), spatial.end());
}

FeatureVector extract_features(const Raster& patch, const FeatureConfig& cfg) {
  if (patch.width() != cfg.patch_px || patch.height() != cfg.patch_px) {
    fail(ErrorKind::kShape, "patch must be " + std::to_string(cfg.patch_px) + "x" +
                                std::to_string(cfg.patch_px) + " pixels");
  }
  FeatureVector fv;
  fv.layout = make_layout(cfg, patch.channels());
  fv.values.reserve(fv.layout.total);
  for (const auto& plane : hog_planes(patch, cfg)) {
    const auto h = hog(plane, cfg.hog);
    fv.values.insert(fv.values.end(), h.begin(), h.end());
  }
  append_color_and_spatial(patch, cfg, fv.values);
  return fv;
}

}  // namespace autovis::features
