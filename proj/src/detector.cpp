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

#include "autovis/detector.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "autovis/error.hpp"

namespace autovis::detector {

std::vector<Rect> WindowPlan::windows() const {
  std::vector<Rect> out;
  out.reserve(total_windows);
  for (const auto& b : bands) {
    for (int j = 0; j < b.ny(); ++j)
      for (int i = 0; i < b.nx(frame_w); ++i)
        out.push_back({i * b.stride_px, b.y_top + j * b.stride_px, b.window_px, b.window_px});
  }
  return out;
}

WindowPlan plan_windows(int frame_w, int frame_h, const std::vector<Band>& bands,
                        const features::FeatureConfig& cfg) {
  cfg.validate();
  if (frame_w < 1 || frame_h < 1) fail(ErrorKind::kConfig, "frame dimensions must be positive");
  if (bands.empty()) fail(ErrorKind::kConfig, "window plan needs at least one band");
  WindowPlan plan{frame_w, frame_h, bands, 0};
  for (std::size_t k = 0; k < bands.size(); ++k) {
    const Band& b = bands[k];
    const std::string where = "band " + std::to_string(k) + ": ";
    if (b.y_top < 0 || b.y_bottom > frame_h || b.y_top >= b.y_bottom) {
      fail(ErrorKind::kConfig, where + "band outside frame");
    }
    if (b.window_px < 1 || b.stride_px < 1) fail(ErrorKind::kConfig, where + "window and stride must be positive");
    if (b.window_px > b.y_bottom - b.y_top || b.window_px > frame_w) {
      fail(ErrorKind::kConfig, where + "window larger than band");
    }
    const bool single = b.nx(frame_w) == 1 && b.ny() == 1;
    const long scaled = static_cast<long>(b.stride_px) * cfg.patch_px;
    if (!single && (scaled % b.window_px != 0 || (scaled / b.window_px) % cfg.hog.cell_px != 0)) {
      fail(ErrorKind::kConfig, where + "stride does not land on HOG cell boundaries after scaling");
    }
    plan.total_windows += b.nx(frame_w) * b.ny();
  }
  return plan;
}

std::vector<Band> default_bands() {
  return {
      {400, 464, 64, 16},
      {400, 532, 96, 12},
      {392, 608, 192, 24},
      {368, 720, 256, 32},
  };
}

// --- band features ----------------------------------------------------------

BandFeatures::BandFeatures(const Raster& frame, const Band& band,
                           const features::FeatureConfig& cfg)
    : cfg_(cfg) {
  const int patch = cfg.patch_px;
  const int band_h = band.y_bottom - band.y_top;
  const int sw = static_cast<int>(static_cast<long>(frame.width()) * patch / band.window_px);
  const int sh = static_cast<int>(static_cast<long>(band_h) * patch / band.window_px);
  scaled_ = resize_bilinear(crop(frame, 0, band.y_top, frame.width(), band_h), sw, sh);
  stride_ = static_cast<int>(static_cast<long>(band.stride_px) * patch / band.window_px);
  nx_ = band.nx(frame.width());
  ny_ = band.ny();
  for (const auto& plane : features::hog_planes(scaled_, cfg)) grids_.emplace_back(plane, cfg.hog);
}

std::vector<double> BandFeatures::window_features(int i, int j) const {
  const int cell = cfg_.hog.cell_px;
  const int patch = cfg_.patch_px;
  const int x = scaled_x(i);
  const int y = scaled_y(j);
  std::vector<double> out;
  for (const auto& grid : grids_) {
    grid.append_window(x / cell, y / cell, patch / cell, patch / cell, out);
  }
  features::append_color_and_spatial(crop(scaled_, x, y, patch, patch), cfg_, out);
  return out;
}

features::FeatureConfig model_feature_config(const classifier::LinearModel& model) {
  return model.layout ? model.layout->config : features::FeatureConfig{};
}

namespace {

template <typename Fn>
void parallel_for(int n, int threads, Fn fn) {
  if (threads == 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::clamp(threads, 1, std::max(1, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([=, &fn] {
      for (int i = t; i < n; i += threads) fn(i);
    });
  }
}

}  // namespace

std::vector<Detection> detect_cars(const Raster& frame, const classifier::LinearModel& model,
                                   const WindowPlan& plan, const DetectConfig& cfg) {
  model.validate();
  if (frame.width() != plan.frame_w || frame.height() != plan.frame_h) {
    fail(ErrorKind::kShape, "frame size does not match the window plan");
  }
  const auto fcfg = model_feature_config(model);
  const auto layout = features::make_layout(fcfg, frame.channels());
  if (layout.total != model.dim()) {
    fail(ErrorKind::kShape, "model dimension " + std::to_string(model.dim()) +
                                " does not match window features of length " +
                                std::to_string(layout.total));
  }

  std::vector<Detection> out;
  for (const auto& band : plan.bands) {
    const BandFeatures bf(frame, band, fcfg);
    const int n = bf.nx() * bf.ny();
    std::vector<double> scores(n);
    parallel_for(n, cfg.threads, [&](int k) {
      scores[k] = classifier::svm_score(model, bf.window_features(k % bf.nx(), k / bf.nx()));
    });
    for (int k = 0; k < n; ++k) {
      if (scores[k] <= cfg.min_score) continue;
      const int i = k % bf.nx();
      const int j = k / bf.nx();
      out.push_back({{i * band.stride_px, band.y_top + j * band.stride_px, band.window_px,
                      band.window_px},
                     scores[k]});
    }
  }
  return out;
}

// --- heatmap fusion ---------------------------------------------------------

double Heatmap::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

Heatmap& Heatmap::operator+=(const Heatmap& other) {
  if (other.width != width || other.height != height) {
    fail(ErrorKind::kShape, "heatmap sizes differ");
  }
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += other.values[i];
  return *this;
}

namespace {

geometry::Point centre_of(const Rect& r) { return {r.x + r.w / 2, r.y + r.h / 2}; }

}  // namespace

Heatmap heatmap_fuse(const std::vector<Detection>& dets, int frame_w, int frame_h) {
  Heatmap heat{frame_w, frame_h, std::vector<double>(static_cast<std::size_t>(frame_w) * frame_h, 0.0)};
  for (const auto& d : dets) {
    const auto& b = d.box;
    if (b.w <= 0 || b.h <= 0 || b.x < 0 || b.y < 0 || b.x + b.w > frame_w || b.y + b.h > frame_h) {
      fail(ErrorKind::kShape, "detection box outside the frame");
    }
    const auto c = centre_of(b);
    const double sx = b.w / 4.0;
    const double sy = b.h / 4.0;
    const int rx = static_cast<int>(std::floor(3.0 * sx));
    const int ry = static_cast<int>(std::floor(3.0 * sy));
    for (int y = std::max(0, c.y - ry); y <= std::min(frame_h - 1, c.y + ry); ++y) {
      const double dy = (y - c.y) / sy;
      for (int x = std::max(0, c.x - rx); x <= std::min(frame_w - 1, c.x + rx); ++x) {
        const double dx = (x - c.x) / sx;
        heat.values[static_cast<std::size_t>(y) * frame_w + x] += std::exp(-0.5 * (dx * dx + dy * dy));
      }
    }
  }
  return heat;
}

namespace {

struct Region {
  Rect bbox;
  double peak = 0.0;
};

// 8-connected regions of heat >= half the maximum; `ids` receives the region
// index per pixel (-1 outside).
std::vector<Region> hot_regions(const Heatmap& heat, std::vector<int>& ids) {
  ids.assign(heat.values.size(), -1);
  std::vector<Region> regions;
  const double peak = heat.max();
  if (!(peak > 0.0)) return regions;
  const double cut = 0.5 * peak;
  std::vector<geometry::Point> stack;
  for (int sy = 0; sy < heat.height; ++sy) {
    for (int sx = 0; sx < heat.width; ++sx) {
      const std::size_t si = static_cast<std::size_t>(sy) * heat.width + sx;
      if (heat.values[si] < cut || ids[si] >= 0) continue;
      const int id = static_cast<int>(regions.size());
      int x0 = sx, x1 = sx, y0 = sy, y1 = sy;
      double top = 0.0;
      ids[si] = id;
      stack.push_back({sx, sy});
      while (!stack.empty()) {
        const auto p = stack.back();
        stack.pop_back();
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
        top = std::max(top, heat.at(p.x, p.y));
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = p.x + dx;
            const int ny = p.y + dy;
            if (nx < 0 || ny < 0 || nx >= heat.width || ny >= heat.height) continue;
            const std::size_t ni = static_cast<std::size_t>(ny) * heat.width + nx;
            if (heat.values[ni] >= cut && ids[ni] < 0) {
              ids[ni] = id;
              stack.push_back({nx, ny});
            }
          }
        }
      }
      regions.push_back({{x0, y0, x1 - x0 + 1, y1 - y0 + 1}, top});
    }
  }
  return regions;
}

void sort_by_score(std::vector<Detection>& dets) {
  std::stable_sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.box.y != b.box.y) return a.box.y < b.box.y;
    return a.box.x < b.box.x;
  });
}

}  // namespace

std::vector<Detection> threshold_boxes(const Heatmap& heat) {
  for (double v : heat.values) {
    if (v < 0.0) fail(ErrorKind::kDomain, "heatmap values must be non-negative");
  }
  std::vector<int> ids;
  std::vector<Detection> out;
  for (const auto& r : hot_regions(heat, ids)) out.push_back({r.bbox, r.peak});
  sort_by_score(out);
  return out;
}

std::vector<Detection> fuse_with_heatmap(const std::vector<Detection>& dets, const Heatmap& heat) {
  std::vector<int> ids;
  const auto regions = hot_regions(heat, ids);
  // Plain and margin-weighted sums of member boxes; the weighted mean wins
  // when any member has a positive score.
  struct Acc {
    double box[4] = {0, 0, 0, 0}, wbox[4] = {0, 0, 0, 0}, weight = 0;
    int n = 0;
  };
  std::vector<Acc> acc(regions.size());
  for (const auto& d : dets) {
    const auto c = centre_of(d.box);
    if (c.x < 0 || c.y < 0 || c.x >= heat.width || c.y >= heat.height) continue;
    const int id = ids[static_cast<std::size_t>(c.y) * heat.width + c.x];
    if (id < 0) continue;
    const double v[4] = {static_cast<double>(d.box.x), static_cast<double>(d.box.y),
                         static_cast<double>(d.box.w), static_cast<double>(d.box.h)};
    const double wt = std::max(d.score, 0.0);
    for (int k = 0; k < 4; ++k) {
      acc[id].box[k] += v[k];
      acc[id].wbox[k] += wt * v[k];
    }
    acc[id].weight += wt;
    ++acc[id].n;
  }
  std::vector<Detection> out;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const Acc& a = acc[r];
    if (a.n == 0) continue;
    int m[4];
    for (int k = 0; k < 4; ++k) {
      const double v = a.weight > 0.0 ? a.wbox[k] / a.weight : a.box[k] / a.n;
      m[k] = static_cast<int>(std::floor(v + 0.5));
    }
    Rect box{m[0], m[1], m[2], m[3]};
    box.x = std::clamp(box.x, 0, heat.width - 1);
    box.y = std::clamp(box.y, 0, heat.height - 1);
    box.w = std::clamp(box.w, 1, heat.width - box.x);
    box.h = std::clamp(box.h, 1, heat.height - box.y);
    out.push_back({box, regions[r].peak});
  }
  sort_by_score(out);
  return out;
}

std::vector<Detection> fuse_detections(const std::vector<Detection>& dets, int frame_w,
                                       int frame_h) {
  return fuse_with_heatmap(dets, heatmap_fuse(dets, frame_w, frame_h));
}

std::vector<Detection> detect_and_fuse(const Raster& frame, const classifier::LinearModel& model,
                                       const WindowPlan& plan, const DetectConfig& cfg) {
  return fuse_detections(detect_cars(frame, model, plan, cfg), frame.width(), frame.height());
}

FrameFuser::FrameFuser(int memory) : memory_(memory) {
  if (memory < 1) fail(ErrorKind::kConfig, "frame memory must be at least 1");
}

std::vector<Detection> FrameFuser::push(const std::vector<Detection>& dets, int frame_w, int frame_h) {
  if (!recent_.empty() && (recent_.back().width != frame_w || recent_.back().height != frame_h)) {
    recent_.clear();
  }
  recent_.push_back(heatmap_fuse(dets, frame_w, frame_h));
  if (static_cast<int>(recent_.size()) > memory_) recent_.erase(recent_.begin());
  Heatmap sum = recent_.front();
  for (std::size_t i = 1; i < recent_.size(); ++i) sum += recent_[i];
  return fuse_with_heatmap(dets, sum);
}

void draw_detections(Raster& frame, const std::vector<Detection>& dets) {
  for (const auto& d : dets) geometry::draw_rect(frame, d.box, 3);
}

}  // namespace autovis::detector
