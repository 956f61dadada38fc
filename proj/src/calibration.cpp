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

#include "autovis/calibration.hpp"

#include <cmath>

#include "autovis/error.hpp"

namespace autovis::calibration {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorKind::kDomain, std::string(name) + " must be a positive finite number");
  }
}

}  // namespace

CameraModel estimate_focal(double n_pixels, double distance_cm, double length_cm) {
  require_positive(n_pixels, "pixel count");
  require_positive(distance_cm, "distance");
  require_positive(length_cm, "reference length");
  return CameraModel{n_pixels * distance_cm / length_cm, length_cm, distance_cm, n_pixels};
}

double estimate_distance(const CameraModel& model, double known_width_cm, double observed_pixels) {
  require_positive(model.focal_px, "focal length");
  require_positive(known_width_cm, "known width");
  require_positive(observed_pixels, "observed pixels");
  // W * F / P regrouped through the reference triple as D * (W / L) * (N / P):
  // equal in exact arithmetic, and it reproduces D bit-exactly when W = L, P = N.
  if (model.ref_pixels > 0.0 && model.ref_distance_cm > 0.0 && model.ref_length_cm > 0.0) {
    return model.ref_distance_cm * (known_width_cm / model.ref_length_cm) *
           (model.ref_pixels / observed_pixels);
  }
  return known_width_cm * model.focal_px / observed_pixels;
}

CameraModel calibrate_from_image(const Raster& img, double distance_cm, double length_cm,
                                 const geometry::RectangleConfig& cfg) {
  require_positive(distance_cm, "distance");
  require_positive(length_cm, "reference length");
  const auto rect = geometry::largest_rectangle(img, cfg);
  return estimate_focal(rect.bbox.w, distance_cm, length_cm);
}

}  // namespace autovis::calibration
