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

#include "autovis/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <tuple>

#include "autovis/error.hpp"

namespace autovis::segmentation {

LabelMask::LabelMask(int w, int h, int n, std::int32_t fill)
    : width(w), height(h), labels(static_cast<std::size_t>(w) * h, fill), num_labels(n) {
  if (w < 1 || h < 1) fail(ErrorKind::kShape, "label mask dimensions must be positive");
}

void LabelMask::validate() const {
  if (labels.size() != static_cast<std::size_t>(width) * height) {
    fail(ErrorKind::kShape, "label mask size does not match dimensions");
  }
  for (auto l : labels) {
    if (l < 0 || l >= num_labels) fail(ErrorKind::kShape, "label outside [0, num_labels)");
  }
}

Raster mask_to_raster(const LabelMask& mask) {
  if (mask.num_labels > 256) fail(ErrorKind::kShape, "too many labels to serialize");
  Raster out(mask.width, mask.height, 1);
  const bool binary = mask.num_labels <= 2;
  std::transform(mask.labels.begin(), mask.labels.end(), out.data().begin(),
                 [binary](std::int32_t l) -> std::uint8_t {
                   return binary ? (l != 0 ? 255 : 0) : static_cast<std::uint8_t>(l);
                 });
  return out;
}

LabelMask raster_to_mask(const Raster& img) {
  if (img.channels() != 1) fail(ErrorKind::kShape, "label raster must be grayscale");
  LabelMask mask(img.width(), img.height(), 1);
  const auto data = img.data();
  const bool binary = std::all_of(data.begin(), data.end(), [](auto v) { return v == 0 || v == 255; });
  int max_label = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    mask.labels[i] = binary ? (data[i] != 0 ? 1 : 0) : data[i];
    max_label = std::max(max_label, mask.labels[i]);
  }
  mask.num_labels = binary ? 2 : max_label + 1;
  return mask;
}

// --- Otsu -------------------------------------------------------------------

std::array<std::uint64_t, 256> histogram(const Raster& gray) {
  if (gray.channels() != 1) fail(ErrorKind::kShape, "histogram expects a grayscale raster");
  std::array<std::uint64_t, 256> hist{};
  for (auto v : gray.data()) ++hist[v];
  return hist;
}

namespace {

double variance_from_sums(std::uint64_t n0, std::uint64_t s0, std::uint64_t n1, std::uint64_t s1) {
  if (n0 == 0 || n1 == 0) return 0.0;
  const double total = static_cast<double>(n0 + n1);
  const double w0 = static_cast<double>(n0) / total;
  const double w1 = static_cast<double>(n1) / total;
  const double mu0 = static_cast<double>(s0) / static_cast<double>(n0);
  const double mu1 = static_cast<double>(s1) / static_cast<double>(n1);
  return w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
}

}  // namespace

double between_class_variance(const std::array<std::uint64_t, 256>& hist, int t) {
  std::uint64_t n0 = 0, s0 = 0, n1 = 0, s1 = 0;
  for (int v = 0; v < 256; ++v) {
    if (v < t) {
      n0 += hist[v];
      s0 += hist[v] * v;
    } else {
      n1 += hist[v];
      s1 += hist[v] * v;
    }
  }
  return variance_from_sums(n0, s0, n1, s1);
}

OtsuResult otsu_threshold(const Raster& gray) {
  const auto hist = histogram(gray);
  if (std::count_if(hist.begin(), hist.end(), [](auto c) { return c > 0; }) < 2) {
    fail(ErrorKind::kDegenerateHistogram, "degenerate histogram: image has a single intensity");
  }
  std::uint64_t n_total = 0, s_total = 0;
  for (int v = 0; v < 256; ++v) {
    n_total += hist[v];
    s_total += hist[v] * v;
  }
  // Running sums over {v < t}; t = 255 is needed to split {254, 255}.
  OtsuResult best;
  std::uint64_t n0 = 0, s0 = 0;
  for (int t = 0; t < 256; ++t) {
    if (t > 0) {
      n0 += hist[t - 1];
      s0 += hist[t - 1] * static_cast<std::uint64_t>(t - 1);
    }
    const double var = variance_from_sums(n0, s0, n_total - n0, s_total - s0);
    if (var > best.between_class_variance) best = {t, var};
  }
  return best;
}

// --- k-means ----------------------------------------------------------------

namespace {

struct Distinct {
  std::array<double, 3> value;
  double count;
};

double sq_dist(const std::array<double, 3>& a, const std::array<double, 3>& b, int dims) {
  double d = 0.0;
  for (int c = 0; c < dims; ++c) d += (a[c] - b[c]) * (a[c] - b[c]);
  return d;
}

}  // namespace

KMeansResult kmeans_cluster(const Raster& img, int k, int max_iter, double tol) {
  if (k < 1) fail(ErrorKind::kDomain, "k must be at least 1");
  if (max_iter < 1) fail(ErrorKind::kDomain, "max_iter must be at least 1");
  if (!(tol >= 0.0)) fail(ErrorKind::kDomain, "tol must be non-negative");
  const int dims = img.channels();
  const std::size_t n_pixels = static_cast<std::size_t>(img.width()) * img.height();

  // Lloyd on the distinct pixel vectors weighted by multiplicity; keys sort
  // lexicographically by channel.
  auto key_of = [&](std::size_t i) {
    std::uint32_t key = 0;
    for (int c = 0; c < dims; ++c) key = (key << 8) | img.data()[i * dims + c];
    return key;
  };
  std::map<std::uint32_t, std::size_t> counts;
  for (std::size_t i = 0; i < n_pixels; ++i) ++counts[key_of(i)];
  if (static_cast<std::size_t>(k) > counts.size()) {
    fail(ErrorKind::kInsufficientDistinct, "insufficient distinct pixels for k=" + std::to_string(k));
  }
  std::vector<Distinct> points;
  std::map<std::uint32_t, std::size_t> index_of;
  for (const auto& [key, count] : counts) {
    Distinct d{{0, 0, 0}, static_cast<double>(count)};
    for (int c = 0; c < dims; ++c) d.value[c] = (key >> (8 * (dims - 1 - c))) & 0xFF;
    index_of[key] = points.size();
    points.push_back(d);
  }

  const std::size_t m = points.size();
  std::vector<std::array<double, 3>> centers(k);
  for (int j = 0; j < k; ++j) {
    const std::size_t idx = k == 1 ? 0 : j * (m - 1) / (k - 1);
    centers[j] = points[idx].value;
  }

  std::vector<int> assign(m);
  auto assign_step = [&] {
    double sse = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      int best = 0;
      double best_d = sq_dist(points[i].value, centers[0], dims);
      for (int j = 1; j < k; ++j) {
        const double d = sq_dist(points[i].value, centers[j], dims);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      assign[i] = best;
      sse += points[i].count * best_d;
    }
    return sse;
  };

  KMeansResult result;
  result.objective_history.push_back(assign_step());
  for (int iter = 1; iter < max_iter; ++iter) {
    auto next = centers;
    std::vector<std::array<double, 3>> sums(k, {0, 0, 0});
    std::vector<double> weight(k, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (int c = 0; c < dims; ++c) sums[assign[i]][c] += points[i].count * points[i].value[c];
      weight[assign[i]] += points[i].count;
    }
    for (int j = 0; j < k; ++j) {
      if (weight[j] > 0) {
        for (int c = 0; c < dims; ++c) next[j][c] = sums[j][c] / weight[j];
      }
    }
    if (next == centers) break;
    centers = next;
    const double prev = result.objective_history.back();
    result.objective_history.push_back(assign_step());
    if (prev - result.objective_history.back() < tol) break;
  }

  std::vector<int> order(k);
  for (int j = 0; j < k; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return centers[a] < centers[b]; });
  std::vector<int> rank(k);
  for (int r = 0; r < k; ++r) rank[order[r]] = r;

  result.mask = LabelMask(img.width(), img.height(), k);
  for (std::size_t i = 0; i < n_pixels; ++i) {
    result.mask.labels[i] = rank[assign[index_of[key_of(i)]]];
  }
  for (int r = 0; r < k; ++r) result.centers.push_back(centers[order[r]]);
  return result;
}

LabelMask kmeans_segment(const Raster& img, int k, int max_iter, double tol) {
  return kmeans_cluster(img, k, max_iter, tol).mask;
}

// --- watershed --------------------------------------------------------------

WatershedResult watershed(const Raster& height, const LabelMask& markers) {
  if (height.channels() != 1) fail(ErrorKind::kShape, "watershed height must be grayscale");
  if (markers.width != height.width() || markers.height != height.height()) {
    fail(ErrorKind::kShape, "marker mask does not match image size");
  }
  const int w = height.width();
  const int h = height.height();
  if (std::none_of(markers.labels.begin(), markers.labels.end(), [](auto l) { return l > 0; })) {
    fail(ErrorKind::kNoMarkers, "no markers: watershed needs at least one seed");
  }

  WatershedResult out{markers, Raster(w, h, 1)};
  auto& labels = out.labels.labels;
  out.labels.num_labels = std::max(markers.num_labels,
                                   *std::max_element(labels.begin(), labels.end()) + 1);

  using Entry = std::tuple<int, int, int, std::uint64_t>;  // height, y, x, insertion
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  std::vector<std::uint8_t> queued(labels.size(), 0);
  std::uint64_t seq = 0;
  constexpr int kDx[4] = {0, -1, 1, 0};
  constexpr int kDy[4] = {-1, 0, 0, 1};

  auto push_neighbours = [&](int x, int y) {
    for (int d = 0; d < 4; ++d) {
      const int nx = x + kDx[d];
      const int ny = y + kDy[d];
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
      if (labels[ni] != 0 || queued[ni]) continue;
      queued[ni] = 1;
      queue.emplace(height.at(nx, ny), ny, nx, seq++);
    }
  };

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (labels[static_cast<std::size_t>(y) * w + x] > 0) push_neighbours(x, y);

  while (!queue.empty()) {
    const auto [level, y, x, order] = queue.top();
    queue.pop();
    std::int32_t chosen = 0;
    bool conflict = false;
    for (int d = 0; d < 4; ++d) {
      const int nx = x + kDx[d];
      const int ny = y + kDy[d];
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      const std::int32_t l = labels[static_cast<std::size_t>(ny) * w + nx];
      if (l == 0) continue;
      if (chosen == 0) {
        chosen = l;
      } else if (l != chosen) {
        conflict = true;
        chosen = std::min(chosen, l);
      }
    }
    labels[static_cast<std::size_t>(y) * w + x] = chosen;
    if (conflict) out.lines.at(x, y) = 255;
    push_neighbours(x, y);
  }
  return out;
}

LabelMask watershed_segment(const Raster& height, const LabelMask& markers) {
  return watershed(height, markers).labels;
}

std::vector<double> distance_transform(const std::vector<std::uint8_t>& inside, int width,
                                       int height) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double diag = std::sqrt(2.0);
  std::vector<double> dist(inside.size());
  for (std::size_t i = 0; i < inside.size(); ++i) dist[i] = inside[i] ? kInf : 0.0;
  auto relax = [&](int x, int y, int nx, int ny, double step) {
    if (nx < 0 || ny < 0 || nx >= width || ny >= height) return;
    double& d = dist[static_cast<std::size_t>(y) * width + x];
    d = std::min(d, dist[static_cast<std::size_t>(ny) * width + nx] + step);
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      relax(x, y, x - 1, y, 1.0);
      relax(x, y, x - 1, y - 1, diag);
      relax(x, y, x, y - 1, 1.0);
      relax(x, y, x + 1, y - 1, diag);
    }
  }
  for (int y = height - 1; y >= 0; --y) {
    for (int x = width - 1; x >= 0; --x) {
      relax(x, y, x + 1, y, 1.0);
      relax(x, y, x + 1, y + 1, diag);
      relax(x, y, x, y + 1, 1.0);
      relax(x, y, x - 1, y + 1, diag);
    }
  }
  return dist;
}

namespace {

// 8-connected component ids over pixels where `member` is set; -1 elsewhere.
std::vector<int> components(const std::vector<std::uint8_t>& member, int width, int height,
                            int* count) {
  std::vector<int> comp(member.size(), -1);
  std::vector<std::size_t> stack;
  int next = 0;
  for (std::size_t start = 0; start < member.size(); ++start) {
    if (!member[start] || comp[start] >= 0) continue;
    comp[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(i % width);
      const int y = static_cast<int>(i / width);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
          const std::size_t ni = static_cast<std::size_t>(ny) * width + nx;
          if (member[ni] && comp[ni] < 0) {
            comp[ni] = next;
            stack.push_back(ni);
          }
        }
      }
    }
    ++next;
  }
  *count = next;
  return comp;
}

}  // namespace

LabelMask otsu_distance_markers(const Raster& gray, int threshold) {
  const int w = gray.width();
  const int h = gray.height();
  LabelMask markers(w, h, 3);
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<std::uint8_t> inside(markers.labels.size());
    for (std::size_t i = 0; i < inside.size(); ++i) {
      inside[i] = (gray.data()[i] >= threshold) == (cls == 1);
    }
    const auto dist = distance_transform(inside, w, h);
    int n_comp = 0;
    const auto comp = components(inside, w, h, &n_comp);
    std::vector<double> peak(n_comp, 0.0);
    for (std::size_t i = 0; i < comp.size(); ++i) {
      if (comp[i] >= 0 && std::isfinite(dist[i])) peak[comp[i]] = std::max(peak[comp[i]], dist[i]);
    }
    for (std::size_t i = 0; i < comp.size(); ++i) {
      if (comp[i] >= 0 && dist[i] >= 0.5 * peak[comp[i]]) markers.labels[i] = cls + 1;
    }
  }
  return markers;
}

// --- floor ------------------------------------------------------------------

Method parse_method(const std::string& name) {
  if (name == "otsu") return Method::kOtsu;
  if (name == "kmeans") return Method::kKMeans;
  if (name == "watershed") return Method::kWatershed;
  fail(ErrorKind::kConfig, "unknown segmentation method '" + name + "'");
}

std::string method_name(Method method) {
  switch (method) {
    case Method::kOtsu: return "otsu";
    case Method::kKMeans: return "kmeans";
    case Method::kWatershed: return "watershed";
  }
  return "otsu";
}

LabelMask segment_floor(const Raster& img, const FloorConfig& cfg, const LabelMask* markers) {
  const Raster blurred = gaussian_blur(ensure_gray(img), cfg.blur_passes);
  const int w = blurred.width();
  const int h = blurred.height();

  LabelMask regions;
  switch (cfg.method) {
    case Method::kOtsu: {
      const int t = otsu_threshold(blurred).threshold;
      regions = LabelMask(w, h, 2);
      for (std::size_t i = 0; i < regions.labels.size(); ++i) {
        regions.labels[i] = blurred.data()[i] >= t ? 1 : 0;
      }
      break;
    }
    case Method::kKMeans:
      regions = kmeans_segment(blurred, cfg.k, cfg.max_iter, cfg.tol);
      break;
    case Method::kWatershed: {
      const LabelMask seeds = (markers != nullptr && !markers->labels.empty())
                                  ? *markers
                                  : otsu_distance_markers(blurred, otsu_threshold(blurred).threshold);
      regions = watershed_segment(sobel_magnitude(blurred), seeds);
      break;
    }
  }

  const std::int32_t floor_label = regions.at(w / 2, h - 1);
  LabelMask out(w, h, 2);
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    out.labels[i] = regions.labels[i] == floor_label ? 0 : 1;
  }
  return out;
}

}  // namespace autovis::segmentation
