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
#include <span>
#include <string>
#include <vector>

namespace autovis {

/// Row-major 8-bit image with 1 (gray) or 3 (interleaved RGB) channels.
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, int channels, std::uint8_t fill = 0);
  Raster(int width, int height, int channels, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t stride() const noexcept {
    return static_cast<std::size_t>(width_) * channels_;
  }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }
  std::span<const std::uint8_t> row(int y) const noexcept {
    return std::span<const std::uint8_t>(data_).subspan(y * stride(), stride());
  }

  std::uint8_t at(int x, int y, int c = 0) const noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  std::uint8_t& at(int x, int y, int c = 0) noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<std::uint8_t> data_;
};

/// 3x3 correlation kernel; output = sum(weights * neighborhood) / divisor.
struct Kernel3 {
  std::array<double, 9> weights{};
  double divisor = 1.0;

  Kernel3(std::array<double, 9> w, double div);

  static Kernel3 identity();
  static Kernel3 gaussian();
  static Kernel3 sobel_x();
  static Kernel3 sobel_y();
};

Raster to_grayscale(const Raster& img);

/// Converts RGB to gray, passes gray through unchanged.
Raster ensure_gray(const Raster& img);

Raster convolve3(const Raster& img, const Kernel3& kernel);
Raster gaussian_blur(const Raster& img, int passes = 1);
Raster sobel_magnitude(const Raster& img);
Raster threshold_binary(const Raster& img, int threshold);

Raster transpose(const Raster& img);
Raster mirror_horizontal(const Raster& img);
Raster crop(const Raster& img, int x, int y, int width, int height);

/// Bilinear resize with pixel-center alignment, rounded to 8 bits.
Raster resize_bilinear(const Raster& img, int width, int height);

/// Same sampling as resize_bilinear but without rounding; interleaved
/// channels, row-major.
std::vector<double> resample_bilinear(const Raster& img, int width, int height);

Raster read_pnm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_pnm(const Raster& img);

Raster read_pnm_file(const std::string& path);
void write_pnm_file(const std::string& path, const Raster& img);

// File helpers shared by the tools.
std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace autovis
