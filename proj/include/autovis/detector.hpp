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

#include "autovis/classifier.hpp"
#include "autovis/features.hpp"
#include "autovis/geometry.hpp"
#include "autovis/raster.hpp"

namespace autovis::detector {

using geometry::Rect;

/// Horizontal strip [y_top, y_bottom) scanned with square windows.
struct Band {
  int y_top = 0;
  int y_bottom = 0;
  int window_px = 64;
  int stride_px = 16;

  int nx(int frame_w) const { return (frame_w - window_px) / stride_px + 1; }
  int ny() const { return (y_bottom - y_top - window_px) / stride_px + 1; }
  friend bool operator==(const Band&, const Band&) = default;
};

struct WindowPlan {
  int frame_w = 0;
  int frame_h = 0;
  std::vector<Band> bands;
  int total_windows = 0;

  /// Every window in enumeration order: band, then y, then x.
  std::vector<Rect> windows() const;
};

/// Validates the bands against the frame and the feature grid. Windows map
/// onto the canonical patch by scaling each band, so the stride scaled by
/// patch_px / window_px must be a whole number of HOG cells.
WindowPlan plan_windows(int frame_w, int frame_h, const std::vector<Band>& bands,
                        const features::FeatureConfig& cfg = {});

/// Near-to-far bands for a 1280x720 road frame; 697 windows in total.
std::vector<Band> default_bands();

struct Detection {
  Rect box;
  double score = 0.0;
  friend bool operator==(const Detection&, const Detection&) = default;
};

struct DetectConfig {
  double min_score = 0.0;
  int threads = 1;  // 0 = hardware concurrency
};

/// One band resized so its windows become canonical patches, with the HOG
/// cell grid computed once for the whole strip.
class BandFeatures {
 public:
  BandFeatures(const Raster& frame, const Band& band, const features::FeatureConfig& cfg);

  const Raster& scaled() const { return scaled_; }
  int scaled_stride() const { return stride_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

  /// Top-left corner of window (i, j) in scaled-band pixels.
  int scaled_x(int i) const { return i * stride_; }
  int scaled_y(int j) const { return j * stride_; }

  std::vector<double> window_features(int i, int j) const;

 private:
  features::FeatureConfig cfg_;
  Raster scaled_;
  std::vector<features::HogCellGrid> grids_;
  int stride_ = 0;
  int nx_ = 0;
  int ny_ = 0;
};

/// Feature configuration a model was trained with (defaults when absent).
features::FeatureConfig model_feature_config(const classifier::LinearModel& model);

std::vector<Detection> detect_cars(const Raster& frame, const classifier::LinearModel& model,
                                   const WindowPlan& plan, const DetectConfig& cfg = {});

struct Heatmap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  double max() const;
  Heatmap& operator+=(const Heatmap& other);
};

/// Sum of unit-amplitude Gaussians centred on each box, sigma = size / 4,
/// truncated at 3 sigma.
Heatmap heatmap_fuse(const std::vector<Detection>& dets, int frame_w, int frame_h);

/// Bounding boxes of the 8-connected regions at or above half the heatmap
/// maximum, scored by their peak, strongest first.
std::vector<Detection> threshold_boxes(const Heatmap& heat);

/// Groups detections by the thresholded regions of `heat`; each region with
/// at least one member (a detection whose centre pixel falls inside it)
/// yields the mean member box, weighted by positive margins, scored by the
/// region peak.
std::vector<Detection> fuse_with_heatmap(const std::vector<Detection>& dets, const Heatmap& heat);

std::vector<Detection> fuse_detections(const std::vector<Detection>& dets, int frame_w,
                                       int frame_h);

std::vector<Detection> detect_and_fuse(const Raster& frame, const classifier::LinearModel& model,
                                       const WindowPlan& plan, const DetectConfig& cfg = {});

/// Fuses each frame's detections against the heatmap summed over the last
/// `memory` frames (1 = per-frame fusion).
class FrameFuser {
 public:
  explicit FrameFuser(int memory = 1);
  std::vector<Detection> push(const std::vector<Detection>& dets, int frame_w, int frame_h);

 private:
  int memory_;
  std::vector<Heatmap> recent_;
};

void draw_detections(Raster& frame, const std::vector<Detection>& dets);

}  // namespace autovis::detector
