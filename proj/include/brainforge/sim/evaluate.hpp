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

#include <memory>
#include <span>
#include <vector>

#include "brainforge/ann/activation.hpp"
#include "brainforge/ann/network.hpp"
#include "brainforge/sim/maze.hpp"
#include "brainforge/sim/robot.hpp"

namespace brainforge::sim {

struct EvaluationResult {
  double fitness = 0.0;  // [0, 2]; above 1 iff the goal was reached
  Point behavior;        // final position
  std::vector<Pose> trajectory;  // one pose per step taken
  bool goal_reached = false;
  int steps_used = 0;
  friend bool operator==(const EvaluationResult&, const EvaluationResult&) = default;
};

class Controller {
 public:
  virtual ~Controller() = default;
  virtual Controls act(const SensorReading& sensors) = 0;
};

// Drives with one synchronous network update per simulator step; outputs are
// (turn, speed_raw) in output_order. Activations persist across steps.
class NetworkController final : public Controller {
 public:
  // Throws Error(kArity) unless the network has 9 inputs and 2 outputs.
  explicit NetworkController(const ann::NetworkPhenotype& network);
  Controls act(const SensorReading& sensors) override;

 private:
  ann::NetworkRunner runner_;
};

// Ignores its sensors.
class FixedController final : public Controller {
 public:
  explicit FixedController(Controls controls) : controls_(controls) {}
  Controls act(const SensorReading&) override { return controls_; }

 private:
  Controls controls_;
};

// Fitness on success is 1 + (max_steps - steps_used) / max_steps, otherwise
// max(0, 1 - final goal distance / start goal distance).
double fitness_for(const Maze& maze, const SimConfig& config, Point final_position,
                   bool goal_reached, int steps_used);

EvaluationResult evaluate(Controller& controller, const Maze& maze, const SimConfig& config = {});
EvaluationResult evaluate(const ann::NetworkPhenotype& network, const Maze& maze,
                          const SimConfig& config = {});

}  // namespace brainforge::sim
