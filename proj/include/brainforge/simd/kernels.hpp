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

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace brainforge::simd {

// Walls in structure-of-arrays layout; segment i runs (ax[i], ay[i]) to
// (bx[i], by[i]).
struct SegmentsView {
  std::span<const double> ax;
  std::span<const double> ay;
  std::span<const double> bx;
  std::span<const double> by;
  std::size_t size() const { return ax.size(); }
};

// Every variant performs the same IEEE operations in the same order (no
// fused multiply-add), so results are bit-identical across variants.
struct KernelTable {
  std::string_view name;

  // acc[i] += weight * src[i]
  void (*axpy)(std::span<double> acc, double weight, std::span<const double> src);

  // out[i] = (xs[i] - px)^2 + (ys[i] - py)^2
  void (*squared_distances)(double px, double py, std::span<const double> xs,
                            std::span<const double> ys, std::span<double> out);

  // out[i] = ray parameter t >= 0 at which origin + t*dir crosses segment i,
  // or +inf when the ray misses (parallel rays never hit).
  void (*ray_segment_hits)(double ox, double oy, double dx, double dy,
                           const SegmentsView& segments, std::span<double> out);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_kernels();

// Best supported table. Setting BRAINFORGE_SIMD=scalar in the environment
// forces the reference kernels.
const KernelTable& active_kernels();

}  // namespace brainforge::simd
