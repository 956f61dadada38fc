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

#include "autovis/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "autovis/error.hpp"
#include "autovis/simd/kernels.hpp"

namespace autovis {
namespace {

void check_dims(int width, int height, int channels) {
  if (width < 1 || height < 1) fail(ErrorKind::kShape, "raster dimensions must be positive");
  if (channels != 1 && channels != 3) fail(ErrorKind::kShape, "raster must have 1 or 3 channels");
}

void require_gray(const Raster& img, const char* op) {
  if (img.channels() != 1) fail(ErrorKind::kShape, std::string(op) + " expects a grayscale raster");
}

// Copy with a one-pixel replicated border, the layout the SIMD kernels read.
std::vector<std::uint8_t> pad_replicate(const Raster& img) {
  const int w = img.width();
  const int h = img.height();
  const std::size_t stride = static_cast<std::size_t>(w) + 2;
  std::vector<std::uint8_t> padded(stride * (h + 2));
  for (int py = 0; py < h + 2; ++py) {
    const int sy = std::clamp(py - 1, 0, h - 1);
    const auto src = img.row(sy);
    std::uint8_t* dst = padded.data() + py * stride;
    dst[0] = src[0];
    std::copy(src.begin(), src.end(), dst + 1);
    dst[w + 1] = src[w - 1];
  }
  return padded;
}

}  // namespace

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kAlreadyGrayscale: return "already-grayscale";
    case ErrorKind::kPnmHeader: return "pnm-header";
    case ErrorKind::kPnmMaxval: return "pnm-maxval";
    case ErrorKind::kPnmTruncated: return "pnm-truncated";
    case ErrorKind::kDegenerateHistogram: return "degenerate-histogram";
    case ErrorKind::kInsufficientDistinct: return "insufficient-distinct";
    case ErrorKind::kNoMarkers: return "no-markers";
    case ErrorKind::kNoRectangle: return "no-rectangle";
    case ErrorKind::kSingleClass: return "single-class";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kInsufficientMapContent: return "insufficient-map-content";
    case ErrorKind::kAmbiguousLocalization: return "ambiguous-localization";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kUsage: return "usage";
  }
  return "unknown";
}

Raster::Raster(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height, channels);
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Raster::Raster(int width, int height, int channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_dims(width, height, channels);
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    fail(ErrorKind::kShape, "raster payload length does not match dimensions");
  }
}

Kernel3::Kernel3(std::array<double, 9> w, double div) : weights(w), divisor(div) {
  if (div == 0.0) fail(ErrorKind::kDomain, "kernel divisor must be non-zero");
}

Kernel3 Kernel3::identity() { return Kernel3({0, 0, 0, 0, 1, 0, 0, 0, 0}, 1.0); }
Kernel3 Kernel3::gaussian() { return Kernel3({1, 2, 1, 2, 4, 2, 1, 2, 1}, 16.0); }
Kernel3 Kernel3::sobel_x() { return Kernel3({-1, 0, 1, -2, 0, 2, -1, 0, 1}, 1.0); }
Kernel3 Kernel3::sobel_y() { return Kernel3({-1, -2, -1, 0, 0, 0, 1, 2, 1}, 1.0); }

Raster to_grayscale(const Raster& img) {
  if (img.channels() != 3) fail(ErrorKind::kAlreadyGrayscale, "image is already grayscale");
  Raster out(img.width(), img.height(), 1);
  simd::active_kernels().rgb_to_gray(img.data().data(),
                                     static_cast<std::size_t>(img.width()) * img.height(),
                                     out.data().data());
  return out;
}

Raster ensure_gray(const Raster& img) {
  return img.channels() == 1 ? img : to_grayscale(img);
}

Raster convolve3(const Raster& img, const Kernel3& kernel) {
  require_gray(img, "convolve3");
  const auto padded = pad_replicate(img);
  Raster out(img.width(), img.height(), 1);
  simd::active_kernels().convolve3(padded.data(), img.width() + 2, img.width(), img.height(),
                                   kernel.weights.data(), kernel.divisor, out.data().data());
  return out;
}

Raster gaussian_blur(const Raster& img, int passes) {
  if (passes < 0) fail(ErrorKind::kDomain, "blur passes must be non-negative");
  Raster out = img;
  for (int i = 0; i < passes; ++i) out = convolve3(out, Kernel3::gaussian());
  return out;
}

Raster sobel_magnitude(const Raster& img) {
  require_gray(img, "sobel_magnitude");
  const auto padded = pad_replicate(img);
  Raster out(img.width(), img.height(), 1);
  simd::active_kernels().sobel_magnitude(padded.data(), img.width() + 2, img.width(),
                                         img.height(), out.data().data());
  return out;
}

Raster threshold_binary(const Raster& img, int threshold) {
  require_gray(img, "threshold_binary");
  if (threshold < 0 || threshold > 255) fail(ErrorKind::kDomain, "threshold must be in 0..255");
  Raster out(img.width(), img.height(), 1);
  std::transform(img.data().begin(), img.data().end(), out.data().begin(),
                 [threshold](std::uint8_t v) -> std::uint8_t { return v >= threshold ? 255 : 0; });
  return out;
}

Raster transpose(const Raster& img) {
  Raster out(img.height(), img.width(), img.channels());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < img.channels(); ++c) out.at(y, x, c) = img.at(x, y, c);
  return out;
}

Raster mirror_horizontal(const Raster& img) {
  Raster out(img.width(), img.height(), img.channels());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < img.channels(); ++c)
        out.at(img.width() - 1 - x, y, c) = img.at(x, y, c);
  return out;
}

Raster crop(const Raster& img, int x, int y, int width, int height) {
  if (x < 0 || y < 0 || width < 1 || height < 1 || x + width > img.width() ||
      y + height > img.height()) {
    fail(ErrorKind::kShape, "crop rectangle outside the raster");
  }
  Raster out(width, height, img.channels());
  const std::size_t row_bytes = static_cast<std::size_t>(width) * img.channels();
  for (int r = 0; r < height; ++r) {
    const auto src = img.row(y + r).subspan(static_cast<std::size_t>(x) * img.channels(), row_bytes);
    std::copy(src.begin(), src.end(), out.data().begin() + r * row_bytes);
  }
  return out;
}

std::vector<double> resample_bilinear(const Raster& img, int width, int height) {
  if (width < 1 || height < 1) fail(ErrorKind::kShape, "resize target must be positive");
  const int ch = img.channels();
  std::vector<double> out(static_cast<std::size_t>(width) * height * ch);
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double ty = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, img.width() - 1);
      const double tx = fx - x0;
      for (int c = 0; c < ch; ++c) {
        const double top = img.at(x0, y0, c) + tx * (img.at(x1, y0, c) - img.at(x0, y0, c));
        const double bot = img.at(x0, y1, c) + tx * (img.at(x1, y1, c) - img.at(x0, y1, c));
        out[(static_cast<std::size_t>(y) * width + x) * ch + c] = top + ty * (bot - top);
      }
    }
  }
  return out;
}

Raster resize_bilinear(const Raster& img, int width, int height) {
  if (width == img.width() && height == img.height()) return img;
  const auto samples = resample_bilinear(img, width, height);
  Raster out(width, height, img.channels());
  std::transform(samples.begin(), samples.end(), out.data().begin(), [](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
  });
  return out;
}

// --- PNM ---------------------------------------------------------------------

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = static_cast<char>(bytes_[pos_]);
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  int read_uint(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      fail(ErrorKind::kPnmHeader, std::string("malformed PNM header: expected ") + what);
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > (1L << 24)) fail(ErrorKind::kPnmHeader, std::string("PNM ") + what + " too large");
    }
    return static_cast<int>(value);
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }
  bool at_end() const { return pos_ >= bytes_.size(); }
  std::uint8_t peek() const { return bytes_[pos_]; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Raster read_pnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    fail(ErrorKind::kPnmHeader, "malformed PNM header: expected P5 or P6 magic");
  }
  const int channels = bytes[1] == '5' ? 1 : 3;
  HeaderReader reader(bytes);
  reader.advance(2);
  const int width = reader.read_uint("width");
  const int height = reader.read_uint("height");
  const int maxval = reader.read_uint("maxval");
  if (width < 1 || height < 1) fail(ErrorKind::kPnmHeader, "malformed PNM header: zero dimension");
  if (maxval != 255) fail(ErrorKind::kPnmMaxval, "unsupported PNM maxval " + std::to_string(maxval));
  if (reader.at_end() || !std::isspace(reader.peek())) {
    fail(ErrorKind::kPnmHeader, "malformed PNM header: missing separator after maxval");
  }
  reader.advance(1);
  const std::size_t need = static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() - reader.pos() < need) {
    fail(ErrorKind::kPnmTruncated, "truncated PNM payload: expected " + std::to_string(need) +
                                       " bytes, found " + std::to_string(bytes.size() - reader.pos()));
  }
  const auto payload = bytes.subspan(reader.pos(), need);
  return Raster(width, height, channels, std::vector<std::uint8_t>(payload.begin(), payload.end()));
}

std::vector<std::uint8_t> write_pnm(const Raster& img) {
  const std::string header = std::string(img.channels() == 1 ? "P5" : "P6") + "\n" +
                             std::to_string(img.width()) + " " + std::to_string(img.height()) +
                             "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data().begin(), img.data().end());
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "write failed for " + path);
}

Raster read_pnm_file(const std::string& path) { return read_pnm(read_file_bytes(path)); }

void write_pnm_file(const std::string& path, const Raster& img) {
  write_file_bytes(path, write_pnm(img));
}

}  // namespace autovis
