// Copyright 2026 The BrainForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <immintrin.h>

#include <limits>

#include "brainforge/simd/kernels.hpp"

// Compiled with -mavx2 only; callers reach these through avx2_kernels(), which
// checks CPU support first.

namespace brainforge::simd {
namespace {

constexpr std::size_t kLanes = 4;

void axpy_avx2(std::span<double> acc, double weight, std::span<const double> src) {
  const std::size_t n = acc.size();
  const __m256d w = _mm256_set1_pd(weight);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d a = _mm256_loadu_pd(acc.data() + i);
    const __m256d s = _mm256_loadu_pd(src.data() + i);
    _mm256_storeu_pd(acc.data() + i, _mm256_add_pd(a, _mm256_mul_pd(w, s)));
  }
  for (; i < n; ++i) acc[i] = acc[i] + weight * src[i];
}

void squared_distances_avx2(double px, double py, std::span<const double> xs,
                            std::span<const double> ys, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d vx = _mm256_set1_pd(px);
  const __m256d vy = _mm256_set1_pd(py);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs.data() + i), vx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys.data() + i), vy);
    _mm256_storeu_pd(out.data() + i,
                     _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - px;
    const double dy = ys[i] - py;
    out[i] = dx * dx + dy * dy;
  }
}

void ray_segment_hits_avx2(double ox, double oy, double dx, double dy,
                           const SegmentsView& seg, std::span<double> out) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t n = out.size();
  const __m256d vox = _mm256_set1_pd(ox);
  const __m256d voy = _mm256_set1_pd(oy);
  const __m256d vdx = _mm256_set1_pd(dx);
  const __m256d vdy = _mm256_set1_pd(dy);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d inf = _mm256_set1_pd(kInf);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d ax = _mm256_loadu_pd(seg.ax.data() + i);
    const __m256d ay = _mm256_loadu_pd(seg.ay.data() + i);
    const __m256d ex = _mm256_sub_pd(_mm256_loadu_pd(seg.bx.data() + i), ax);
    const __m256d ey = _mm256_sub_pd(_mm256_loadu_pd(seg.by.data() + i), ay);
    const __m256d wx = _mm256_sub_pd(ax, vox);
    const __m256d wy = _mm256_sub_pd(ay, voy);
    const __m256d denom = _mm256_sub_pd(_mm256_mul_pd(vdx, ey), _mm256_mul_pd(vdy, ex));
    const __m256d t =
        _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(wx, ey), _mm256_mul_pd(wy, ex)), denom);
    const __m256d u =
        _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(wx, vdy), _mm256_mul_pd(wy, vdx)), denom);
    __m256d hit = _mm256_cmp_pd(denom, zero, _CMP_NEQ_UQ);
    hit = _mm256_and_pd(hit, _mm256_cmp_pd(t, zero, _CMP_GE_OQ));
    hit = _mm256_and_pd(hit, _mm256_cmp_pd(u, zero, _CMP_GE_OQ));
    hit = _mm256_and_pd(hit, _mm256_cmp_pd(u, one, _CMP_LE_OQ));
    _mm256_storeu_pd(out.data() + i, _mm256_blendv_pd(inf, t, hit));
  }
  for (; i < n; ++i) {
    const double ex = seg.bx[i] - seg.ax[i];
    const double ey = seg.by[i] - seg.ay[i];
    const double wx = seg.ax[i] - ox;
    const double wy = seg.ay[i] - oy;
    const double denom = dx * ey - dy * ex;
    if (denom == 0.0) {
      out[i] = kInf;
      continue;
    }
    const double t = (wx * ey - wy * ex) / denom;
    const double u = (wx * dy - wy * dx) / denom;
    out[i] = (t >= 0.0 && u >= 0.0 && u <= 1.0) ? t : kInf;
  }
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2", &axpy_avx2, &squared_distances_avx2,
                                 &ray_segment_hits_avx2};
  return table;
}

}  // namespace brainforge::simd
