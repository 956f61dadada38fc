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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "autovis/raster.hpp"

namespace autovis::features {

struct HogParams {
  int cell_px = 8;
  int block_cells = 2;
  int bins = 9;  // unsigned orientations over [0, 180)

  void validate() const;
  friend bool operator==(const HogParams&, const HogParams&) = default;
};

inline constexpr double kHogEpsilon = 1e-6;
inline constexpr double kHogClip = 0.2;

struct FeatureConfig {
  int patch_px = 64;
  HogParams hog;
  int hist_bins = 32;
  int spatial_px = 32;
  bool hog_all_channels = false;  // HOG per colour channel instead of on gray

  void validate() const;
  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct FeatureLayout {
  int channels = 3;
  Span hog;
  Span color_hist;
  Span spatial;
  std::size_t total = 0;
  FeatureConfig config;

  friend bool operator==(const FeatureLayout&, const FeatureLayout&) = default;
};

FeatureLayout make_layout(const FeatureConfig& cfg, int channels);

struct FeatureVector {
  std::vector<double> values;
  FeatureLayout layout;
};

std::size_t hog_length(int width, int height, const HogParams& p);

/// Gradient-orientation histograms of a gray patch, L2-Hys block normalised.
std::vector<double> hog(const Raster& patch, const HogParams& p);

/// Per-channel equal-width histograms over [0, 255], concatenated, raw counts.
std::vector<double> color_histogram(const Raster& patch, int bins = 32);

/// Bilinear resize to size x size, flattened row-major with interleaved channels.
std::vector<double> spatial_features(const Raster& patch, int size = 32);

FeatureVector extract_features(const Raster& patch, const FeatureConfig& cfg = {});

// --- building blocks shared with the sliding-window detector ----------------

/// Cell histograms of one image plane, precomputed once for every way a
/// window edge can cut through a cell. A cell on a window's left edge sees
/// its left column's gradient with a replicated border (as a standalone
/// patch would), and likewise for the other three sides; `variant` is the
/// bit set of clamped sides.
class HogCellGrid {
 public:
  static constexpr int kClampLeft = 1;
  static constexpr int kClampRight = 2;
  static constexpr int kClampTop = 4;
  static constexpr int kClampBottom = 8;

  HogCellGrid(const Raster& plane, const HogParams& p);

  int cells_x() const { return cells_x_; }
  int cells_y() const { return cells_y_; }

  std::span<const double> cell(int variant, int cx, int cy) const;

  /// Appends the block-normalised descriptor of the window spanning cells
  /// [cx0, cx0 + ncx) x [cy0, cy0 + ncy).
  void append_window(int cx0, int cy0, int ncx, int ncy, std::vector<double>& out) const;

 private:
  HogParams params_;
  int cells_x_ = 0;
  int cells_y_ = 0;
  std::vector<double> hist_;  // [variant][cy][cx][bin]
};

/// Planes HOG runs on: the gray conversion, or each channel separately.
std::vector<Raster> hog_planes(const Raster& patch, const FeatureConfig& cfg);

void append_color_and_spatial(const Raster& patch, const FeatureConfig& cfg,
                              std::vector<double>& out);

}  // namespace autovis::features
