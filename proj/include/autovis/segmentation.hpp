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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "autovis/raster.hpp"

namespace autovis::segmentation {

/// Per-pixel region ids, row-major; every label < num_labels.
struct LabelMask {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;
  int num_labels = 0;

  LabelMask() = default;
  LabelMask(int w, int h, int num_labels, std::int32_t fill = 0);

  std::int32_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
  std::int32_t& at(int x, int y) { return labels[static_cast<std::size_t>(y) * width + x]; }

  void validate() const;

  friend bool operator==(const LabelMask&, const LabelMask&) = default;
};

/// Binary masks become 0/255; multi-label masks keep raw ids (< 256).
Raster mask_to_raster(const LabelMask& mask);
LabelMask raster_to_mask(const Raster& img);

struct OtsuResult {
  int threshold = 0;  // pixels >= threshold form the upper class
  double between_class_variance = 0.0;
};

std::array<std::uint64_t, 256> histogram(const Raster& gray);

/// w0 * w1 * (mu0 - mu1)^2 for the split {v < t} / {v >= t}; 0 when a side is empty.
double between_class_variance(const std::array<std::uint64_t, 256>& hist, int t);

OtsuResult otsu_threshold(const Raster& gray);

struct KMeansResult {
  LabelMask mask;
  std::vector<std::array<double, 3>> centers;  // sorted by first channel
  std::vector<double> objective_history;       // SSE after each assignment step
};

KMeansResult kmeans_cluster(const Raster& img, int k, int max_iter, double tol);
LabelMask kmeans_segment(const Raster& img, int k, int max_iter, double tol);

struct WatershedResult {
  LabelMask labels;
  Raster lines;  // 255 where differently-labelled floods meet
};

/// Priority flood of `height` from the non-zero seeds in `markers`.
WatershedResult watershed(const Raster& height, const LabelMask& markers);
LabelMask watershed_segment(const Raster& height, const LabelMask& markers);

/// Seeds for the two Otsu classes: per connected component, the pixels whose
/// distance to the other class is at least half of that component's maximum.
/// Label 1 marks the lower class, 2 the upper class.
LabelMask otsu_distance_markers(const Raster& gray, int threshold);

/// Chamfer (1, sqrt 2) distance from each `inside` pixel to the nearest
/// outside pixel; 0 outside. The image border is not a boundary.
std::vector<double> distance_transform(const std::vector<std::uint8_t>& inside, int width,
                                       int height);

enum class Method { kOtsu, kKMeans, kWatershed };

Method parse_method(const std::string& name);
std::string method_name(Method method);

struct FloorConfig {
  Method method = Method::kOtsu;
  int blur_passes = 1;
  int k = 2;
  int max_iter = 100;
  double tol = 1e-6;
};

/// Binary floor (0) / obstacle (1) mask. The class holding the bottom-centre
/// pixel is floor. `markers`, when non-empty, overrides the derived watershed seeds.
LabelMask segment_floor(const Raster& img, const FloorConfig& cfg,
                        const LabelMask* markers = nullptr);

}  // namespace autovis::segmentation
