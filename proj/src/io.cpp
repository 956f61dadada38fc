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

#include "autovis/io.hpp"

#include <charconv>
#include <sstream>

#include "autovis/error.hpp"
#include "json.hpp"

namespace autovis::io {

using nlohmann::ordered_json;

namespace {

ordered_json parse(const std::string& text, const char* what) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string(what) + ": " + e.what());
  }
}

template <typename F>
auto field(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string(what) + ": " + e.what());
  }
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json span_json(const features::Span& s) { return {{"offset", s.offset}, {"length", s.length}}; }

features::Span span_from(const ordered_json& j) {
  return {j.at("offset").get<std::size_t>(), j.at("length").get<std::size_t>()};
}

ordered_json layout_json(const features::FeatureLayout& l) {
  const auto& c = l.config;
  ordered_json j;
  j["channels"] = l.channels;
  j["patch_px"] = c.patch_px;
  j["hog"] = {{"cell_px", c.hog.cell_px}, {"block_cells", c.hog.block_cells}, {"bins", c.hog.bins},
              {"all_channels", c.hog_all_channels}};
  j["hist_bins"] = c.hist_bins;
  j["spatial_px"] = c.spatial_px;
  j["segments"] = {{"hog", span_json(l.hog)},
                   {"color_hist", span_json(l.color_hist)},
                   {"spatial", span_json(l.spatial)}};
  j["total"] = l.total;
  return j;
}

features::FeatureLayout layout_from(const ordered_json& j) {
  features::FeatureConfig c;
  c.patch_px = j.at("patch_px").get<int>();
  const auto& h = j.at("hog");
  c.hog.cell_px = h.at("cell_px").get<int>();
  c.hog.block_cells = h.at("block_cells").get<int>();
  c.hog.bins = h.at("bins").get<int>();
  c.hog_all_channels = h.at("all_channels").get<bool>();
  c.hist_bins = j.at("hist_bins").get<int>();
  c.spatial_px = j.at("spatial_px").get<int>();
  const auto layout = features::make_layout(c, j.at("channels").get<int>());
  const auto& seg = j.at("segments");
  if (span_from(seg.at("hog")) != layout.hog || span_from(seg.at("color_hist")) != layout.color_hist ||
      span_from(seg.at("spatial")) != layout.spatial || j.at("total").get<std::size_t>() != layout.total) {
    fail(ErrorKind::kParse, "feature layout segments disagree with its parameters");
  }
  return layout;
}

ordered_json segment_json(const geometry::Segment& s) {
  return {{"x0", s.x0}, {"y0", s.y0}, {"x1", s.x1}, {"y1", s.y1}, {"valid", s.valid}};
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string camera_to_json(const calibration::CameraModel& cam) {
  ordered_json j;
  j["focal_px"] = cam.focal_px;
  j["ref_length_cm"] = cam.ref_length_cm;
  j["ref_distance_cm"] = cam.ref_distance_cm;
  j["ref_pixels"] = cam.ref_pixels;
  return dump(j);
}

calibration::CameraModel camera_from_json(const std::string& text) {
  const auto j = parse(text, "camera");
  return field("camera", [&] {
    calibration::CameraModel cam;
    cam.focal_px = j.at("focal_px").get<double>();
    cam.ref_length_cm = j.value("ref_length_cm", 0.0);
    cam.ref_distance_cm = j.value("ref_distance_cm", 0.0);
    cam.ref_pixels = j.value("ref_pixels", 0.0);
    if (!(cam.focal_px > 0.0)) fail(ErrorKind::kDomain, "camera focal length must be positive");
    return cam;
  });
}

std::string lane_to_json(const geometry::Lane& lane) {
  ordered_json j;
  j["left"] = segment_json(lane.left);
  j["right"] = segment_json(lane.right);
  return dump(j);
}

std::string hough_to_json(const std::vector<geometry::HoughLine>& lines) {
  ordered_json j = ordered_json::array();
  for (const auto& l : lines) j.push_back({{"rho", l.rho}, {"theta_deg", l.theta_deg}, {"votes", l.votes}});
  return dump(j);
}

std::string layout_to_json(const features::FeatureLayout& layout) { return dump(layout_json(layout)); }

features::FeatureLayout layout_from_json(const std::string& text) {
  const auto j = parse(text, "feature layout");
  return field("feature layout", [&] { return layout_from(j); });
}

std::string model_to_json(const classifier::LinearModel& model) {
  ordered_json j;
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["feat_mean"] = model.feat_mean;
  j["feat_std"] = model.feat_std;
  j["lambda"] = model.lambda;
  j["epochs"] = model.epochs;
  j["seed"] = model.seed;
  j["feature_layout"] = model.layout ? layout_json(*model.layout) : ordered_json(nullptr);
  return dump(j);
}

classifier::LinearModel model_from_json(const std::string& text) {
  const auto j = parse(text, "model");
  auto model = field("model", [&] {
    classifier::LinearModel m;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.feat_mean = j.at("feat_mean").get<std::vector<double>>();
    m.feat_std = j.at("feat_std").get<std::vector<double>>();
    m.lambda = j.at("lambda").get<double>();
    m.epochs = j.at("epochs").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("feature_layout") && !j.at("feature_layout").is_null()) {
      m.layout = layout_from(j.at("feature_layout"));
    }
    return m;
  });
  model.validate();
  return model;
}

std::string detections_to_json(const std::string& frame, const std::vector<detector::Detection>& dets) {
  ordered_json j;
  j["frame"] = frame;
  j["boxes"] = ordered_json::array();
  for (const auto& d : dets) {
    j["boxes"].push_back(
        {{"x", d.box.x}, {"y", d.box.y}, {"w", d.box.w}, {"h", d.box.h}, {"score", d.score}});
  }
  return dump(j);
}

std::string localization_to_json(const mapping::Localization& loc) {
  ordered_json j;
  j["pose"] = {{"x", loc.pose.x}, {"y", loc.pose.y}, {"theta_deg", loc.pose.theta_deg}};
  j["score"] = loc.score;
  j["overlap"] = loc.overlap;
  return dump(j);
}

std::string features_to_csv(const FeatureTable& table) {
  std::string out = "label";
  const std::size_t dim = table.rows.empty() ? 0 : table.rows.front().size();
  for (std::size_t i = 0; i < dim; ++i) out += ",f" + std::to_string(i);
  out += '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out += std::to_string(table.labels[r]);
    for (double v : table.rows[r]) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

FeatureTable features_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("label", 0) != 0) {
    fail(ErrorKind::kParse, "feature CSV must start with a label column header");
  }
  FeatureTable table;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = p + line.size();
    int label = 0;
    auto r = std::from_chars(p, end, label);
    if (r.ec != std::errc()) fail(ErrorKind::kParse, "line " + std::to_string(lineno) + ": bad label");
    p = r.ptr;
    std::vector<double> row;
    while (p != end) {
      if (*p != ',') fail(ErrorKind::kParse, "line " + std::to_string(lineno) + ": expected ','");
      double v = 0.0;
      const auto rv = std::from_chars(p + 1, end, v);
      if (rv.ec != std::errc()) fail(ErrorKind::kParse, "line " + std::to_string(lineno) + ": bad value");
      row.push_back(v);
      p = rv.ptr;
    }
    if (!table.rows.empty() && row.size() != table.rows.front().size()) {
      fail(ErrorKind::kShape, "line " + std::to_string(lineno) + ": inconsistent feature count");
    }
    table.labels.push_back(label);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace autovis::io
