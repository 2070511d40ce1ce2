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

#include "brainforge/evo/novelty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "brainforge/simd/kernels.hpp"

namespace brainforge::evo {

namespace {

constexpr int kGrowAfterAdditions = 8;
constexpr int kShrinkAfterStale = 25;
constexpr double kGrowFactor = 1.2;
constexpr double kShrinkFactor = 0.8;

struct PointColumns {
  std::vector<double> x;
  std::vector<double> y;

  void append(std::span<const sim::Point> points) {
    for (const auto& p : points) {
      x.push_back(p.x);
      y.push_back(p.y);
    }
  }
};

double knn_mean(std::vector<double>& squared, int k) {
  if (squared.empty() || k <= 0) return 0.0;
  const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), squared.size());
  std::partial_sort(squared.begin(), squared.begin() + static_cast<std::ptrdiff_t>(kk),
                    squared.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < kk; ++i) sum += std::sqrt(squared[i]);
  return sum / static_cast<double>(kk);
}

}  // namespace

double score_novelty(sim::Point behavior, std::span<const sim::Point> others,
                     const NoveltyArchive& archive, int k) {
  PointColumns cols;
  cols.append(others);
  cols.append(archive.points);
  std::vector<double> squared(cols.x.size());
  simd::active_kernels().squared_distances(behavior.x, behavior.y, cols.x, cols.y, squared);
  return knn_mean(squared, k);
}

std::vector<double> score_population(std::span<const sim::Point> behaviors,
                                     const NoveltyArchive& archive, int k) {
  PointColumns cols;
  cols.append(behaviors);
  cols.append(archive.points);
  const auto& kernels = simd::active_kernels();
  std::vector<double> all(cols.x.size());
  std::vector<double> squared;
  std::vector<double> scores;
  scores.reserve(behaviors.size());
  for (std::size_t i = 0; i < behaviors.size(); ++i) {
    kernels.squared_distances(behaviors[i].x, behaviors[i].y, cols.x, cols.y, all);
    squared.assign(all.begin(), all.end());
    squared.erase(squared.begin() + static_cast<std::ptrdiff_t>(i));
    scores.push_back(knn_mean(squared, k));
  }
  return scores;
}

NoveltyArchive update_archive(const NoveltyArchive& archive,
                              std::span<const sim::Point> behaviors) {
  NoveltyArchive out = archive;
  int added = 0;
  for (const auto& b : behaviors) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& p : out.points) nearest = std::min(nearest, std::hypot(p.x - b.x, p.y - b.y));
    if (nearest > out.add_threshold) {
      out.points.push_back(b);
      ++added;
    }
  }
  if (added > kGrowAfterAdditions) out.add_threshold *= kGrowFactor;
  if (added == 0) {
    if (++out.stale_generations >= kShrinkAfterStale) {
      out.add_threshold *= kShrinkFactor;
      out.stale_generations = 0;
    }
  } else {
    out.stale_generations = 0;
  }
  return out;
}

}  // namespace brainforge::evo
