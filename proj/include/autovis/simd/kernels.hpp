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

#include <cstddef>
#include <cstdint>

namespace autovis::simd {

// Inner loops that dominate run time. Each table entry has a scalar reference
// implementation; vector variants must reproduce it bit-for-bit, except `dot`
// whose lane-parallel summation order is allowed to differ in the last ulps.
//
// `padded` images carry a one-pixel replicated border: pixel (x, y) of the
// logical image lives at padded[(y + 1) * stride + x + 1].
struct KernelTable {
  const char* name;

  void (*rgb_to_gray)(const std::uint8_t* rgb, std::size_t pixels, std::uint8_t* gray);

  void (*convolve3)(const std::uint8_t* padded, std::size_t stride, int width, int height,
                    const double* weights, double divisor, std::uint8_t* out);

  void (*sobel_magnitude)(const std::uint8_t* padded, std::size_t stride, int width,
                          int height, std::uint8_t* out);

  double (*dot)(const double* a, const double* b, std::size_t n);

  // Cells are 0 = unknown, anything else = known state. Adds to `overlap` the
  // number of positions where both are known and to `match` those where both
  // are known and equal.
  void (*match_count)(const std::uint8_t* a, const std::uint8_t* b, std::size_t n,
                      std::uint64_t* match, std::uint64_t* overlap);
};

const KernelTable& scalar_kernels();

/// nullptr when the binary or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// Best available table. AUTOVIS_KERNELS=scalar forces the reference path.
const KernelTable& active_kernels();

}  // namespace autovis::simd
