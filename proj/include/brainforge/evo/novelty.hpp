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
#include <vector>

#include "brainforge/sim/maze.hpp"

namespace brainforge::evo {

struct NoveltyArchive {
  std::vector<sim::Point> points;
  double add_threshold = 0.05;
  int stale_generations = 0;  // consecutive generations with no additions
  friend bool operator==(const NoveltyArchive&, const NoveltyArchive&) = default;
};

// Mean Euclidean distance from `behavior` to its k nearest neighbours among
// `others` and the archive points. k is clipped to the number of candidate
// points; 0 when there are none.
double score_novelty(sim::Point behavior, std::span<const sim::Point> others,
                     const NoveltyArchive& archive, int k);

// score_novelty for every behavior, each excluding only itself (by index).
std::vector<double> score_population(std::span<const sim::Point> behaviors,
                                     const NoveltyArchive& archive, int k);

// Adds, in order, each behavior whose nearest archived point (including ones
// added earlier in the same call) is farther than the threshold; an empty
// archive accepts anything. Then adapts: more than 8 additions multiply the
// threshold by 1.2, and 25 consecutive generations without one multiply it
// by 0.8.
NoveltyArchive update_archive(const NoveltyArchive& archive,
                              std::span<const sim::Point> behaviors);

}  // namespace brainforge::evo
