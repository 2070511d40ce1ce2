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

#include <limits>

#include "brainforge/simd/kernels.hpp"

namespace brainforge::simd {
namespace {

void axpy_scalar(std::span<double> acc, double weight, std::span<const double> src) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = acc[i] + weight * src[i];
}

void squared_distances_scalar(double px, double py, std::span<const double> xs,
                              std::span<const double> ys, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double dx = xs[i] - px;
    const double dy = ys[i] - py;
    out[i] = dx * dx + dy * dy;
  }
}

void ray_segment_hits_scalar(double ox, double oy, double dx, double dy,
                             const SegmentsView& seg, std::span<double> out) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.size(); ++i) {
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

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", &axpy_scalar, &squared_distances_scalar,
                                 &ray_segment_hits_scalar};
  return table;
}

}  // namespace brainforge::simd
