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

#include <array>

#include "brainforge/sim/maze.hpp"

namespace brainforge::sim {

inline constexpr std::size_t kRangefinderCount = 5;
inline constexpr std::size_t kRadarCount = 4;
inline constexpr std::size_t kSensorCount = kRangefinderCount + kRadarCount;

// Entries 0-4: rangefinders, normalized by the maximum range. Entries 5-8:
// goal radar one-hot over (front, left, back, right).
using SensorReading = std::array<double, kSensorCount>;

struct Controls {
  double turn = 0.0;       // [-1, 1], positive turns counterclockwise
  double speed_raw = 0.0;  // [-1, 1], -1 is stopped
};

// Wraps an angle into [-pi, pi).
double wrap_angle(double angle);

// Index into (front, left, back, right) for a bearing relative to the
// heading. Each quadrant spans (center - 45deg, center + 45deg].
int radar_quadrant(double relative_bearing);

SensorReading sense(const Maze& maze, const Pose& robot, const SimConfig& config = {});

// Turns, then drives straight. A move that would bring the robot disc closer
// than its radius to any wall stops at the contact point; there is no sliding.
Pose step(const Maze& maze, const Pose& robot, Controls controls, const SimConfig& config = {});

}  // namespace brainforge::sim
