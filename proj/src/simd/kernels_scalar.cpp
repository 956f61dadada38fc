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

#include "autovis/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "kernels_internal.hpp"

namespace autovis::simd {
namespace {

void rgb_to_gray(const std::uint8_t* rgb, std::size_t pixels, std::uint8_t* gray) {
  for (std::size_t i = 0; i < pixels; ++i) {
    const double y = kLumaR * rgb[3 * i] + kLumaG * rgb[3 * i + 1] + kLumaB * rgb[3 * i + 2];
    gray[i] = round_clamp_u8(y);
  }
}

void convolve3(const std::uint8_t* padded, std::size_t stride, int width, int height,
               const double* weights, double divisor, std::uint8_t* out) {
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* r0 = padded + static_cast<std::size_t>(y) * stride;
    const std::uint8_t* r1 = r0 + stride;
    const std::uint8_t* r2 = r1 + stride;
    std::uint8_t* dst = out + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      acc += weights[0] * r0[x];
      acc += weights[1] * r0[x + 1];
      acc += weights[2] * r0[x + 2];
      acc += weights[3] * r1[x];
      acc += weights[4] * r1[x + 1];
      acc += weights[5] * r1[x + 2];
      acc += weights[6] * r2[x];
      acc += weights[7] * r2[x + 1];
      acc += weights[8] * r2[x + 2];
      dst[x] = round_clamp_u8(acc / divisor);
    }
  }
}

void sobel_magnitude(const std::uint8_t* padded, std::size_t stride, int width, int height,
                     std::uint8_t* out) {
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* r0 = padded + static_cast<std::size_t>(y) * stride;
    const std::uint8_t* r1 = r0 + stride;
    const std::uint8_t* r2 = r1 + stride;
    std::uint8_t* dst = out + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      const int gx = (r0[x + 2] - r0[x]) + 2 * (r1[x + 2] - r1[x]) + (r2[x + 2] - r2[x]);
      const int gy = (r2[x] - r0[x]) + 2 * (r2[x + 1] - r0[x + 1]) + (r2[x + 2] - r0[x + 2]);
      dst[x] = round_clamp_u8(std::sqrt(static_cast<double>(gx * gx + gy * gy)));
    }
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void match_count(const std::uint8_t* a, const std::uint8_t* b, std::size_t n,
                 std::uint64_t* match, std::uint64_t* overlap) {
  std::uint64_t m = 0;
  std::uint64_t o = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool both = a[i] != 0 && b[i] != 0;
    o += both;
    m += both && a[i] == b[i];
  }
  *match += m;
  *overlap += o;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", rgb_to_gray, convolve3, sobel_magnitude, dot,
                                 match_count};
  return table;
}

}  // namespace autovis::simd
