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

#include "autovis/steering.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "autovis/error.hpp"

namespace autovis::steering {

void AngleSeries::validate() const {
  if (frame_ids.size() != angles.size()) fail(ErrorKind::kShape, "frame ids and angles differ in length");
  for (double a : angles) {
    if (!(std::abs(a) <= kMaxAngle)) fail(ErrorKind::kDomain, "steering angle outside [-90, 90]");
  }
}

double bin_angle(double a, double bin_width) {
  if (!(bin_width > 0.0)) fail(ErrorKind::kDomain, "bin width must be positive");
  if (!(std::abs(a) <= kMaxAngle)) fail(ErrorKind::kDomain, "steering angle outside [-90, 90]");
  const double b = std::round(a / bin_width) * bin_width;
  return std::clamp(b, -kMaxAngle, kMaxAngle);
}

std::vector<double> smooth_values(const std::vector<double>& s, double lambda) {
  if (!(lambda >= 0.0)) fail(ErrorKind::kDomain, "lambda must be non-negative");
  if (s.empty()) fail(ErrorKind::kShape, "series must hold at least one angle");
  const std::size_t n = s.size();
  if (lambda == 0.0 || n == 1) {
    std::vector<double> out = s;
    for (double& v : out) v = std::clamp(v, -kMaxAngle, kMaxAngle);
    return out;
  }
  // (I + lambda * L) x = s with L the path-graph Laplacian. Solving for the
  // offset from s[0] returns constant series untouched.
  std::vector<double> diag(n), rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double degree = (i == 0 || i + 1 == n) ? 1.0 : 2.0;
    diag[i] = 1.0 + lambda * degree;
    rhs[i] = s[i] - s[0];
  }
  const double off = -lambda;
  // Thomas algorithm; the matrix is strictly diagonally dominant.
  std::vector<double> c(n, 0.0);
  c[0] = off / diag[0];
  rhs[0] /= diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double m = diag[i] - off * c[i - 1];
    c[i] = off / m;
    rhs[i] = (rhs[i] - off * rhs[i - 1]) / m;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
  for (double& v : rhs) v = std::clamp(v + s[0], -kMaxAngle, kMaxAngle);
  return rhs;
}

AngleSeries smooth_series(const AngleSeries& s, double lambda) {
  s.validate();
  return {s.frame_ids, smooth_values(s.angles, lambda)};
}

double total_variation(const std::vector<double>& s) {
  double tv = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) tv += std::abs(s[i] - s[i - 1]);
  return tv;
}

namespace {

std::string trim(const std::string& v) {
  const auto b = v.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return v.substr(b, v.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

AngleSeries parse_series_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "frame_id,angle_deg") {
    fail(ErrorKind::kParse, "angle CSV must start with the header frame_id,angle_deg");
  }
  AngleSeries out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(ErrorKind::kParse, "line " + std::to_string(lineno) + ": expected two fields");
    const std::string id_text = trim(line.substr(0, comma));
    const std::string angle_text = trim(line.substr(comma + 1));
    std::int64_t id = 0;
    double angle = 0.0;
    const auto r1 = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    const auto r2 = std::from_chars(angle_text.data(), angle_text.data() + angle_text.size(), angle);
    if (r1.ec != std::errc() || r1.ptr != id_text.data() + id_text.size() || r2.ec != std::errc() ||
        r2.ptr != angle_text.data() + angle_text.size()) {
      fail(ErrorKind::kParse, "line " + std::to_string(lineno) + ": malformed number");
    }
    out.frame_ids.push_back(id);
    out.angles.push_back(angle);
  }
  out.validate();
  if (out.angles.empty()) fail(ErrorKind::kShape, "series must hold at least one angle");
  return out;
}

std::string format_series_csv(const AngleSeries& s) {
  std::string out = "frame_id,angle_deg\n";
  char buf[64];
  for (std::size_t i = 0; i < s.angles.size(); ++i) {
    out += std::to_string(s.frame_ids[i]);
    out += ',';
    const auto r = std::to_chars(buf, buf + sizeof buf, s.angles[i]);
    out.append(buf, r.ptr);
    out += '\n';
  }
  return out;
}

}  // namespace autovis::steering
