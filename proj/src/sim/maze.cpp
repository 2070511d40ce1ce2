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

#include "brainforge/sim/maze.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "brainforge/error.hpp"

namespace brainforge::sim {

void SimConfig::check() const {
  if (!(dt > 0.0 && max_steps > 0 && max_speed > 0.0 && max_turn_rate > 0.0 &&
        rangefinder_range > 0.0 && robot_radius > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "simulation parameters must be positive");
  }
}

double point_segment_distance(Point p, const Segment& s) {
  const double ex = s.b.x - s.a.x;
  const double ey = s.b.y - s.a.y;
  const double len2 = ex * ex + ey * ey;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x - s.a.x) * ex + (p.y - s.a.y) * ey) / len2, 0.0, 1.0);
  return std::hypot(p.x - (s.a.x + t * ex), p.y - (s.a.y + t * ey));
}

Maze::Maze(std::vector<Segment> interior_walls, Pose start, Goal goal)
    : walls_(std::move(interior_walls)), start_(start), goal_(goal) {
  walls_.push_back({{0, 0}, {1, 0}});
  walls_.push_back({{1, 0}, {1, 1}});
  walls_.push_back({{1, 1}, {0, 1}});
  walls_.push_back({{0, 1}, {0, 0}});
  for (const auto& w : walls_) {
    ax_.push_back(w.a.x);
    ay_.push_back(w.a.y);
    bx_.push_back(w.b.x);
    by_.push_back(w.b.y);
  }
  if (!(goal_.radius > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "goal radius must be positive");
  }
  if (!(start_.x > 0.0 && start_.x < 1.0 && start_.y > 0.0 && start_.y < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "start lies outside the unit square");
  }
  if (!(clearance({start_.x, start_.y}) > kRobotRadius)) {
    throw Error(ErrorCode::kInvalidArgument, "start is within the robot radius of a wall");
  }
  if (std::hypot(goal_.x - start_.x, goal_.y - start_.y) <= goal_.radius) {
    throw Error(ErrorCode::kInvalidArgument, "start lies inside the goal");
  }
}

double Maze::clearance(Point p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : walls_) best = std::min(best, point_segment_distance(p, w));
  return best;
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& message) {
  throw Error(ErrorCode::kParse, "maze: " + message, "line " + std::to_string(line));
}

std::vector<double> read_numbers(std::istringstream& in, std::size_t count, int line) {
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || !std::isfinite(v)) parse_fail(line, "bad number '" + token + "'");
    values.push_back(v);
  }
  if (values.size() != count) {
    parse_fail(line, "expected " + std::to_string(count) + " numbers, got " +
                         std::to_string(values.size()));
  }
  return values;
}

}  // namespace

Maze load_maze(std::string_view text) {
  std::istringstream stream{std::string(text)};
  std::string raw;
  std::vector<Segment> walls;
  std::optional<Pose> start;
  std::optional<Goal> goal;
  int line = 0;
  while (std::getline(stream, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream in(raw);
    std::string keyword;
    if (!(in >> keyword)) continue;
    if (keyword == "start") {
      if (start) parse_fail(line, "duplicate start");
      const auto v = read_numbers(in, 3, line);
      start = Pose{v[0], v[1], v[2]};
    } else if (keyword == "goal") {
      if (goal) parse_fail(line, "duplicate goal");
      const auto v = read_numbers(in, 3, line);
      goal = Goal{v[0], v[1], v[2]};
    } else if (keyword == "wall") {
      const auto v = read_numbers(in, 4, line);
      walls.push_back({{v[0], v[1]}, {v[2], v[3]}});
    } else {
      parse_fail(line, "unknown keyword '" + keyword + "'");
    }
  }
  if (!start) parse_fail(line, "missing start line");
  if (!goal) parse_fail(line, "missing goal line");
  return Maze(std::move(walls), *start, *goal);
}

Maze load_maze_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open maze file", path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_maze(buffer.str());
}

}  // namespace brainforge::sim
