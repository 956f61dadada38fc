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

#include <string>
#include <vector>

#include "autovis/calibration.hpp"
#include "autovis/classifier.hpp"
#include "autovis/detector.hpp"
#include "autovis/features.hpp"
#include "autovis/geometry.hpp"
#include "autovis/mapping.hpp"

// Text formats for everything the command-line tool reads or writes. JSON is
// emitted with stable key order and two-space indentation.
namespace autovis::io {

std::string camera_to_json(const calibration::CameraModel& cam);
calibration::CameraModel camera_from_json(const std::string& text);

std::string lane_to_json(const geometry::Lane& lane);
std::string hough_to_json(const std::vector<geometry::HoughLine>& lines);

std::string layout_to_json(const features::FeatureLayout& layout);
features::FeatureLayout layout_from_json(const std::string& text);

std::string model_to_json(const classifier::LinearModel& model);
classifier::LinearModel model_from_json(const std::string& text);

std::string detections_to_json(const std::string& frame, const std::vector<detector::Detection>& dets);

std::string localization_to_json(const mapping::Localization& loc);

/// Feature table: `label,f0,f1,...` header, then one row per patch.
struct FeatureTable {
  std::vector<int> labels;
  std::vector<std::vector<double>> rows;
};
std::string features_to_csv(const FeatureTable& table);
FeatureTable features_from_csv(const std::string& text);

/// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace autovis::io
