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

// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <bit>
#include <cmath>
#include <cstring>

#include "autovis/simd/kernels.hpp"
#include "kernels_internal.hpp"

namespace autovis::simd {
namespace {

inline __m256d load4_u8_pd(const std::uint8_t* p) {
  std::int32_t bits;
  std::memcpy(&bits, p, 4);
  return _mm256_cvtepi32_pd(_mm_cvtepu8_epi32(_mm_cvtsi32_si128(bits)));
}

inline __m128i round_clamp_epi32(__m256d v) {
  const __m256d r = _mm256_floor_pd(_mm256_add_pd(v, _mm256_set1_pd(0.5)));
  const __m256d c = _mm256_min_pd(_mm256_max_pd(r, _mm256_setzero_pd()), _mm256_set1_pd(255.0));
  return _mm256_cvttpd_epi32(c);
}

inline void store4_u8(std::uint8_t* dst, __m128i v) {
  const __m128i packed = _mm_packus_epi16(_mm_packus_epi32(v, v), _mm_setzero_si128());
  const std::int32_t bits = _mm_cvtsi128_si32(packed);
  std::memcpy(dst, &bits, 4);
}

void rgb_to_gray(const std::uint8_t* rgb, std::size_t pixels, std::uint8_t* gray) {
  const __m256d wr = _mm256_set1_pd(kLumaR);
  const __m256d wg = _mm256_set1_pd(kLumaG);
  const __m256d wb = _mm256_set1_pd(kLumaB);
  std::size_t i = 0;
  for (; i + 4 <= pixels; i += 4) {
    const std::uint8_t* p = rgb + 3 * i;
    const __m256d r = _mm256_cvtepi32_pd(_mm_setr_epi32(p[0], p[3], p[6], p[9]));
    const __m256d g = _mm256_cvtepi32_pd(_mm_setr_epi32(p[1], p[4], p[7], p[10]));
    const __m256d b = _mm256_cvtepi32_pd(_mm_setr_epi32(p[2], p[5], p[8], p[11]));
    __m256d y = _mm256_mul_pd(wr, r);
    y = _mm256_add_pd(y, _mm256_mul_pd(wg, g));
    y = _mm256_add_pd(y, _mm256_mul_pd(wb, b));
    store4_u8(gray + i, round_clamp_epi32(y));
  }
  scalar_kernels().rgb_to_gray(rgb + 3 * i, pixels - i, gray + i);
}

void convolve3(const std::uint8_t* padded, std::size_t stride, int width, int height,
               const double* weights, double divisor, std::uint8_t* out) {
  __m256d w[9];
  for (int k = 0; k < 9; ++k) w[k] = _mm256_set1_pd(weights[k]);
  const __m256d div = _mm256_set1_pd(divisor);
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* rows[3] = {padded + static_cast<std::size_t>(y) * stride,
                                   padded + static_cast<std::size_t>(y + 1) * stride,
                                   padded + static_cast<std::size_t>(y + 2) * stride};
    std::uint8_t* dst = out + static_cast<std::size_t>(y) * width;
    int x = 0;
    // 4-byte loads at x + 2 stay inside the padded row (width + 2 bytes).
    for (; x + 4 <= width; x += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (int k = 0; k < 9; ++k) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(w[k], load4_u8_pd(rows[k / 3] + x + k % 3)));
      }
      store4_u8(dst + x, round_clamp_epi32(_mm256_div_pd(acc, div)));
    }
    for (; x < width; ++x) {
      double acc = 0.0;
      for (int k = 0; k < 9; ++k) acc += weights[k] * rows[k / 3][x + k % 3];
      dst[x] = round_clamp_u8(acc / divisor);
    }
  }
}

inline __m256i load8_u8_epi32(const std::uint8_t* p) {
  return _mm256_cvtepu8_epi32(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(p)));
}

void sobel_magnitude(const std::uint8_t* padded, std::size_t stride, int width, int height,
                     std::uint8_t* out) {
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* r0 = padded + static_cast<std::size_t>(y) * stride;
    const std::uint8_t* r1 = r0 + stride;
    const std::uint8_t* r2 = r1 + stride;
    std::uint8_t* dst = out + static_cast<std::size_t>(y) * width;
    int x = 0;
    // 8-byte loads at x + 2 need x + 10 <= width + 2.
    for (; x + 8 <= width; x += 8) {
      const __m256i a0 = load8_u8_epi32(r0 + x), a1 = load8_u8_epi32(r0 + x + 1),
                    a2 = load8_u8_epi32(r0 + x + 2);
      const __m256i b0 = load8_u8_epi32(r1 + x), b2 = load8_u8_epi32(r1 + x + 2);
      const __m256i c0 = load8_u8_epi32(r2 + x), c1 = load8_u8_epi32(r2 + x + 1),
                    c2 = load8_u8_epi32(r2 + x + 2);
      const __m256i gx = _mm256_add_epi32(
          _mm256_add_epi32(_mm256_sub_epi32(a2, a0), _mm256_sub_epi32(c2, c0)),
          _mm256_slli_epi32(_mm256_sub_epi32(b2, b0), 1));
      const __m256i gy = _mm256_add_epi32(
          _mm256_add_epi32(_mm256_sub_epi32(c0, a0), _mm256_sub_epi32(c2, a2)),
          _mm256_slli_epi32(_mm256_sub_epi32(c1, a1), 1));
      const __m256i mag2 = _mm256_add_epi32(_mm256_mullo_epi32(gx, gx), _mm256_mullo_epi32(gy, gy));
      const __m256d lo = _mm256_sqrt_pd(_mm256_cvtepi32_pd(_mm256_castsi256_si128(mag2)));
      const __m256d hi = _mm256_sqrt_pd(_mm256_cvtepi32_pd(_mm256_extracti128_si256(mag2, 1)));
      store4_u8(dst + x, round_clamp_epi32(lo));
      store4_u8(dst + x + 4, round_clamp_epi32(hi));
    }
    for (; x < width; ++x) {
      const int gx = (r0[x + 2] - r0[x]) + 2 * (r1[x + 2] - r1[x]) + (r2[x + 2] - r2[x]);
      const int gy = (r2[x] - r0[x]) + 2 * (r2[x + 1] - r0[x + 1]) + (r2[x + 2] - r0[x + 2]);
      dst[x] = round_clamp_u8(std::sqrt(static_cast<double>(gx * gx + gy * gy)));
    }
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void match_count(const std::uint8_t* a, const std::uint8_t* b, std::size_t n,
                 std::uint64_t* match, std::uint64_t* overlap) {
  const __m256i zero = _mm256_setzero_si256();
  std::uint64_t m = 0;
  std::uint64_t o = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const __m256i unknown = _mm256_or_si256(_mm256_cmpeq_epi8(va, zero), _mm256_cmpeq_epi8(vb, zero));
    const __m256i equal = _mm256_andnot_si256(unknown, _mm256_cmpeq_epi8(va, vb));
    const auto unknown_bits = static_cast<std::uint32_t>(_mm256_movemask_epi8(unknown));
    const auto equal_bits = static_cast<std::uint32_t>(_mm256_movemask_epi8(equal));
    o += 32 - std::popcount(unknown_bits);
    m += std::popcount(equal_bits);
  }
  *match += m;
  *overlap += o;
  scalar_kernels().match_count(a + i, b + i, n - i, match, overlap);
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", rgb_to_gray, convolve3, sobel_magnitude, dot,
                                 match_count};
  return table;
}

}  // namespace autovis::simd
