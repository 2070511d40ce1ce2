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
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "brainforge/simd/kernels.hpp"

namespace brainforge::sim {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Segment {
  Point a;
  Point b;
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians, [-pi, pi)
  friend bool operator==(const Pose&, const Pose&) = default;
};

struct Goal {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;
  friend bool operator==(const Goal&, const Goal&) = default;
};

inline constexpr double kRobotRadius = 0.015;

struct SimConfig {
  double dt = 0.1;
  int max_steps = 400;
  double max_speed = 0.5;
  double max_turn_rate = std::numbers::pi;
  std::array<double, 5> rangefinder_angles = {-std::numbers::pi / 2, -std::numbers::pi / 4, 0.0,
                                              std::numbers::pi / 4, std::numbers::pi / 2};
  double rangefinder_range = 0.5;
  double robot_radius = kRobotRadius;

  void check() const;
};

// A maze in the unit square. The four boundary walls are always present and
// are appended after the interior walls.
class Maze {
 public:
  // Throws Error(kInvalidArgument) if the start pose is within the robot
  // radius of a wall or inside the goal, or the goal radius is not positive.
  Maze(std::vector<Segment> interior_walls, Pose start, Goal goal);

  const std::vector<Segment>& walls() const { return walls_; }
  std::size_t interior_wall_count() const { return walls_.size() - 4; }
  const Pose& start() const { return start_; }
  const Goal& goal() const { return goal_; }

  simd::SegmentsView segments() const { return {ax_, ay_, bx_, by_}; }

  // Smallest distance from p to any wall.
  double clearance(Point p) const;

 private:
  std::vector<Segment> walls_;
  std::vector<double> ax_, ay_, bx_, by_;
  Pose start_;
  Goal goal_;
};

// Line-oriented format: '#' comments, and lines `start x y theta`,
// `goal x y r`, `wall x1 y1 x2 y2`; exactly one start and one goal.
// Throws Error(kParse) with "line N" in the detail.
Maze load_maze(std::string_view text);
Maze load_maze_file(const std::string& path);

double point_segment_distance(Point p, const Segment& s);

}  // namespace brainforge::sim
