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

#include <cstdint>
#include <string>
#include <vector>

namespace autovis::steering {

inline constexpr double kMaxAngle = 90.0;

/// Per-frame steering angles in degrees, each within [-90, 90].
struct AngleSeries {
  std::vector<std::int64_t> frame_ids;
  std::vector<double> angles;

  void validate() const;
  friend bool operator==(const AngleSeries&, const AngleSeries&) = default;
};

/// round(a / width) * width, halves away from zero, clamped to [-90, 90].
double bin_angle(double a, double bin_width = 2.0);

/// Exact minimiser of sum (x_i - s_i)^2 + lambda * sum (x_{i+1} - x_i)^2,
/// clamped to [-90, 90].
std::vector<double> smooth_values(const std::vector<double>& s, double lambda);
AngleSeries smooth_series(const AngleSeries& s, double lambda = 5.0);

double total_variation(const std::vector<double>& s);

/// `frame_id,angle_deg` with a header row.
AngleSeries parse_series_csv(const std::string& text);
std::string format_series_csv(const AngleSeries& s);

}  // namespace autovis::steering
