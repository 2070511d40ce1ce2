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

#include "brainforge/sim/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "brainforge/error.hpp"

namespace brainforge::sim {

namespace {

void require_interface(const ann::NetworkPhenotype& network) {
  if (network.input_order.size() != kSensorCount || network.output_order.size() != 2) {
    throw Error(ErrorCode::kArity, "controller needs 9 inputs and 2 outputs",
                std::to_string(network.input_order.size()) + " inputs, " +
                    std::to_string(network.output_order.size()) + " outputs");
  }
}

const ann::NetworkPhenotype& checked(const ann::NetworkPhenotype& network) {
  require_interface(network);
  return network;
}

}  // namespace

NetworkController::NetworkController(const ann::NetworkPhenotype& network)
    : runner_(checked(network)) {}

Controls NetworkController::act(const SensorReading& sensors) {
  const auto out = runner_.step(sensors);
  return {out[0], out[1]};
}

double fitness_for(const Maze& maze, const SimConfig& config, Point final_position,
                   bool goal_reached, int steps_used) {
  if (goal_reached) {
    return 1.0 + static_cast<double>(config.max_steps - steps_used) / config.max_steps;
  }
  const Goal& g = maze.goal();
  const Pose& s = maze.start();
  const double d_start = std::hypot(g.x - s.x, g.y - s.y);
  const double d_final = std::hypot(g.x - final_position.x, g.y - final_position.y);
  return std::max(0.0, 1.0 - d_final / d_start);
}

EvaluationResult evaluate(Controller& controller, const Maze& maze, const SimConfig& config) {
  config.check();
  EvaluationResult result;
  result.trajectory.reserve(static_cast<std::size_t>(config.max_steps));
  Pose pose = maze.start();
  const Goal& goal = maze.goal();
  for (int k = 0; k < config.max_steps; ++k) {
    const Controls controls = controller.act(sense(maze, pose, config));
    pose = step(maze, pose, controls, config);
    result.trajectory.push_back(pose);
    result.steps_used = k + 1;
    if (std::hypot(goal.x - pose.x, goal.y - pose.y) <= goal.radius) {
      result.goal_reached = true;
      break;
    }
  }
  result.behavior = {pose.x, pose.y};
  result.fitness =
      fitness_for(maze, config, result.behavior, result.goal_reached, result.steps_used);
  return result;
}

EvaluationResult evaluate(const ann::NetworkPhenotype& network, const Maze& maze,
                          const SimConfig& config) {
  NetworkController controller(network);
  return evaluate(controller, maze, config);
}

}  // namespace brainforge::sim
