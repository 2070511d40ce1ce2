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

#include "brainforge/sim/robot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace brainforge::sim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Distances within this band of the radius count as touching.
constexpr double kContactBand = 1e-12;
constexpr double kPenetrationTolerance = 1e-9;
}  // namespace

double wrap_angle(double angle) {
  double a = angle - kTwoPi * std::floor((angle + std::numbers::pi) / kTwoPi);
  if (a >= std::numbers::pi) a -= kTwoPi;
  if (a < -std::numbers::pi) a = -std::numbers::pi;
  return a;
}

int radar_quadrant(double relative_bearing) {
  const double rel = wrap_angle(relative_bearing);
  const double t = (rel - std::numbers::pi / 4) / (std::numbers::pi / 2);
  const int q = static_cast<int>(std::ceil(t));
  return ((q % 4) + 4) % 4;
}

SensorReading sense(const Maze& maze, const Pose& robot, const SimConfig& config) {
  SensorReading reading{};
  const auto& kernels = simd::active_kernels();
  const auto segments = maze.segments();
  std::array<double, 64> local;
  std::vector<double> heap;
  std::span<double> hits;
  if (segments.size() <= local.size()) {
    hits = std::span<double>(local.data(), segments.size());
  } else {
    heap.resize(segments.size());
    hits = heap;
  }
  for (std::size_t i = 0; i < kRangefinderCount; ++i) {
    const double angle = robot.heading + config.rangefinder_angles[i];
    kernels.ray_segment_hits(robot.x, robot.y, std::cos(angle), std::sin(angle), segments, hits);
    const double nearest = *std::min_element(hits.begin(), hits.end());
    reading[i] = std::min(nearest, config.rangefinder_range) / config.rangefinder_range;
  }
  const Goal& g = maze.goal();
  const double bearing = std::atan2(g.y - robot.y, g.x - robot.x) - robot.heading;
  reading[kRangefinderCount + radar_quadrant(bearing)] = 1.0;
  return reading;
}

namespace {

// Earliest fraction t >= 0 of the motion p + t*d at which the disc of radius r
// would come closer than r to the segment; +inf if it never does.
double entry_time(Point p, Point d, const Segment& s, double r) {
  const double f0 = point_segment_distance(p, s);
  const double ex = s.b.x - s.a.x;
  const double ey = s.b.y - s.a.y;
  const double len2 = ex * ex + ey * ey;
  if (f0 < r + kContactBand) {
    // Already touching: distance along a line to a convex set is convex, so
    // moving with non-negative slope never gets closer.
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.x - s.a.x) * ex + (p.y - s.a.y) * ey) / len2, 0.0, 1.0);
    const double nx = p.x - (s.a.x + t * ex);
    const double ny = p.y - (s.a.y + t * ey);
    return (nx * d.x + ny * d.y < 0.0) ? 0.0 : kInf;
  }
  double best = kInf;
  const double dd = d.x * d.x + d.y * d.y;
  if (dd == 0.0) return kInf;
  for (const Point& c : {s.a, s.b}) {
    const double wx = p.x - c.x;
    const double wy = p.y - c.y;
    const double b = 2.0 * (wx * d.x + wy * d.y);
    const double cc = wx * wx + wy * wy - r * r;
    const double disc = b * b - 4.0 * dd * cc;
    if (disc < 0.0) continue;
    const double t = (-b - std::sqrt(disc)) / (2.0 * dd);
    if (t >= 0.0) best = std::min(best, t);
  }
  if (len2 > 0.0) {
    const double len = std::sqrt(len2);
    const double ux = ex / len;
    const double uy = ey / len;
    const double h0 = (p.x - s.a.x) * -uy + (p.y - s.a.y) * ux;
    const double hd = d.x * -uy + d.y * ux;
    double t = kInf;
    if (h0 > 0.0 && hd < 0.0) t = (r - h0) / hd;
    if (h0 < 0.0 && hd > 0.0) t = (-r - h0) / hd;
    if (std::isfinite(t)) {
      t = std::max(t, 0.0);
      const double along = (p.x + t * d.x - s.a.x) * ux + (p.y + t * d.y - s.a.y) * uy;
      if (along >= 0.0 && along <= len) best = std::min(best, t);
    }
  }
  return best;
}

}  // namespace

Pose step(const Maze& maze, const Pose& robot, Controls controls, const SimConfig& config) {
  const double turn = std::clamp(controls.turn, -1.0, 1.0);
  const double speed_raw = std::clamp(controls.speed_raw, -1.0, 1.0);
  Pose next = robot;
  next.heading = wrap_angle(robot.heading + turn * config.max_turn_rate * config.dt);
  const double v = config.max_speed * (speed_raw + 1.0) / 2.0;
  const double travel = v * config.dt;
  if (travel == 0.0) return next;
  const Point p{robot.x, robot.y};
  const Point d{travel * std::cos(next.heading), travel * std::sin(next.heading)};
  double t = 1.0;
  for (const auto& w : maze.walls()) {
    t = std::min(t, entry_time(p, d, w, config.robot_radius));
  }
  Point q{p.x + t * d.x, p.y + t * d.y};
  if (t > 0.0 && maze.clearance(q) < config.robot_radius - kPenetrationTolerance) {
    q = p;  // numerical safety net; the analytic contact point should never trip it
  }
  next.x = q.x;
  next.y = q.y;
  return next;
}

}  // namespace brainforge::sim
