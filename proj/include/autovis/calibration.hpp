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

#include "autovis/geometry.hpp"
#include "autovis/raster.hpp"

namespace autovis::calibration {

/// Perceived focal length F = N * D / L from a reference object of length L
/// (cm) spanning N pixels at distance D (cm).
struct CameraModel {
  double focal_px = 0.0;
  double ref_length_cm = 0.0;
  double ref_distance_cm = 0.0;
  double ref_pixels = 0.0;

  friend bool operator==(const CameraModel&, const CameraModel&) = default;
};

CameraModel estimate_focal(double n_pixels, double distance_cm, double length_cm);

/// Distance (cm) to an object of known width W cm spanning P pixels: W * F / P.
double estimate_distance(const CameraModel& model, double known_width_cm, double observed_pixels);

/// N is the horizontal extent of the largest rectangle in the photo.
CameraModel calibrate_from_image(const Raster& img, double distance_cm, double length_cm,
                                 const geometry::RectangleConfig& cfg = {});

}  // namespace autovis::calibration
