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

#include <cmath>
#include <numbers>

#include "brainforge/error.hpp"
#include "brainforge/evo/engine.hpp"
#include "brainforge/sim/evaluate.hpp"
#include "brainforge/sim/maze.hpp"
#include "brainforge/sim/robot.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace brainforge;
using sim::Controls;
using sim::Pose;

namespace {

constexpr double kPi = std::numbers::pi;

sim::Maze bundled(const std::string& name) {
  return sim::load_maze_file(std::string(BRAINFORGE_MAZE_DIR) + "/" + name + ".maze");
}

sim::Maze open_with(std::vector<sim::Segment> walls) {
  return sim::Maze(std::move(walls), {0.1, 0.5, 0.0}, {0.2, 0.2, 0.05});
}

// Every sensor and the bias drive the speed output at -3. In an open arena
// all rangefinders read 1 at the start, so the speed input is -21 and
// tanh(-21) rounds to exactly -1: the robot never moves.
ann::NetworkPhenotype stationary_brain() {
  ann::NetworkPhenotype net;
  const auto s = evo::maze_substrate(0);
  net.neurons = s.neurons;
  net.input_order = s.input_order;
  net.output_order = s.output_order;
  for (const auto& n : s.neurons) {
    if (n.role == ann::Role::kInput || n.role == ann::Role::kBias) {
      net.connections.push_back({n.id, "speed", -3.0});
    }
  }
  return net;
}

}  // namespace

TEST_CASE("load_maze examples") {
  SUBCASE("no walls gives the four boundary walls") {
    const auto m = sim::load_maze("start 0.1 0.5 0.0\ngoal 0.9 0.5 0.05\n");
    CHECK(m.walls().size() == 4);
    CHECK(m.interior_wall_count() == 0);
    CHECK(m.start() == Pose{0.1, 0.5, 0.0});
  }
  SUBCASE("one interior wall") {
    const auto m = sim::load_maze("# comment\nstart 0.1 0.5 0\ngoal 0.9 0.5 0.05\nwall 0.5 0 0.5 0.7\n");
    REQUIRE(m.interior_wall_count() == 1);
    CHECK(m.walls()[0] == sim::Segment{{0.5, 0.0}, {0.5, 0.7}});
  }
  SUBCASE("start too close to the boundary") {
    CHECK_THROWS_AS(sim::load_maze("start 0.001 0.5 0\ngoal 0.9 0.5 0.05\n"), Error);
  }
  SUBCASE("errors carry the line number") {
    try {
      sim::load_maze("start 0.1 0.5 0\ngoal 0.9 0.5\n");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParse);
      CHECK(e.detail() == "line 2");
    }
    CHECK_THROWS_AS(sim::load_maze("start 0.1 0.5 0\n"), Error);
    CHECK_THROWS_AS(sim::load_maze("start 0.1 0.5 0\ngoal 0.9 0.5 0\n"), Error);
    CHECK_THROWS_AS(sim::load_maze("start 0.1 0.5 0\ngoal 0.9 0.5 0.1\nbogus 1\n"), Error);
  }
  SUBCASE("bundled mazes") {
    CHECK(bundled("open").interior_wall_count() == 0);
    CHECK(bundled("easy").interior_wall_count() == 1);
    CHECK(bundled("hard").interior_wall_count() >= 1);
  }
}

TEST_CASE("sense examples") {
  SUBCASE("forward ray hits a wall at x = 0.9") {
    const auto m = open_with({{{0.9, 0.0}, {0.9, 1.0}}});
    const auto r = sim::sense(m, {0.5, 0.5, 0.0});
    CHECK(r[2] == doctest::Approx(0.8).epsilon(1e-12));
  }
  SUBCASE("nothing in range reads 1") {
    const auto m = open_with({});
    const auto r = sim::sense(m, {0.5, 0.5, 0.0});
    for (std::size_t i = 0; i < 5; ++i) CHECK(r[i] == 1.0);
  }
  SUBCASE("goal due east of an east-facing robot") {
    const sim::Maze m({}, {0.1, 0.5, 0.0}, {0.9, 0.5, 0.05});
    const auto r = sim::sense(m, m.start());
    CHECK(r[5] == 1.0);
    CHECK(r[6] == 0.0);
    CHECK(r[7] == 0.0);
    CHECK(r[8] == 0.0);
  }
  SUBCASE("radar quadrants and their boundaries") {
    CHECK(sim::radar_quadrant(0.0) == 0);
    CHECK(sim::radar_quadrant(kPi / 2) == 1);
    CHECK(sim::radar_quadrant(kPi) == 2);
    CHECK(sim::radar_quadrant(-kPi / 2) == 3);
    CHECK(sim::radar_quadrant(kPi / 4) == 0);
    CHECK(sim::radar_quadrant(-kPi / 4) == 3);
    CHECK(sim::radar_quadrant(3 * kPi / 4) == 1);
    CHECK(sim::radar_quadrant(-3 * kPi / 4) == 2);
  }
}

TEST_CASE("step examples") {
  const auto open = open_with({});
  SUBCASE("full speed forward") {
    const auto p = sim::step(open, {0.5, 0.5, 0.0}, Controls{0.0, 1.0});
    CHECK(p.x == doctest::Approx(0.55).epsilon(1e-15));
    CHECK(p.y == 0.5);
    CHECK(p.heading == 0.0);
  }
  SUBCASE("speed -1 stays put") {
    const Pose start{0.5, 0.5, 0.3};
    CHECK(sim::step(open, start, Controls{0.0, -1.0}) == start);
  }
  SUBCASE("stop at contact") {
    const auto m = open_with({{{0.56, 0.0}, {0.56, 1.0}}});
    const auto p = sim::step(m, {0.5, 0.5, 0.0}, Controls{0.0, 1.0});
    CHECK(p.x == doctest::Approx(0.545).epsilon(1e-12));
    CHECK(m.clearance({p.x, p.y}) >= sim::kRobotRadius - 1e-9);
  }
  SUBCASE("heading wraps into [-pi, pi)") {
    const auto p = sim::step(open, {0.5, 0.5, 3.0}, Controls{1.0, -1.0});
    CHECK(p.heading == doctest::Approx(3.0 + kPi * 0.1 - 2 * kPi));
    CHECK(sim::wrap_angle(kPi) == -kPi);
  }
}

TEST_CASE("evaluate examples") {
  const auto open = bundled("open");
  SUBCASE("pinned forward controller reaches the goal at step 15") {
    sim::FixedController c(Controls{0.0, 1.0});
    const auto r = sim::evaluate(c, open);
    CHECK(r.goal_reached);
    CHECK(r.steps_used == 15);
    CHECK(r.behavior.x == doctest::Approx(0.85).epsilon(1e-12));
    CHECK(r.fitness == 1.9625);
  }
  SUBCASE("pinned stopped controller scores zero") {
    sim::FixedController c(Controls{0.0, -1.0});
    const auto r = sim::evaluate(c, open);
    CHECK(r.behavior == sim::Point{0.1, 0.5});
    CHECK(r.fitness == 0.0);
    CHECK(r.steps_used == 400);
  }
  SUBCASE("stationary network scores zero") {
    const auto r = sim::evaluate(stationary_brain(), open);
    CHECK(r.fitness == 0.0);
    CHECK(r.behavior == sim::Point{0.1, 0.5});
  }
  SUBCASE("arity is checked") {
    CHECK_THROWS_AS(sim::evaluate(testing::tiny_network(1.0), open), Error);
  }
}

TEST_CASE("property: behaviour is the last pose and fitness obeys its bounds") {
  RandomStream rng(31);
  for (int i = 0; i < 60; ++i) {
    RandomStream g = rng.substream(static_cast<std::uint64_t>(i));
    const auto genome = evo::random_genome(g);
    const auto net = substrate::decode(genome, evo::maze_substrate());
    const auto maze = testing::random_maze(rng);
    const auto r = sim::evaluate(net, maze);
    REQUIRE(r.trajectory.size() == static_cast<std::size_t>(r.steps_used));
    CHECK(r.behavior == sim::Point{r.trajectory.back().x, r.trajectory.back().y});
    CHECK(r.fitness >= 0.0);
    CHECK(r.fitness <= 2.0);
    CHECK((r.fitness > 1.0) == r.goal_reached);
    CHECK(sim::evaluate(net, maze) == r);
  }
}

TEST_CASE("property: random driving never penetrates a wall") {
  RandomStream rng(32);
  for (int run = 0; run < 50; ++run) {
    const auto maze = testing::random_maze(rng);
    Pose p = maze.start();
    for (int s = 0; s < 400; ++s) {
      p = sim::step(maze, p, Controls{2 * rng.uniform() - 1, 2 * rng.uniform() - 1});
      REQUIRE(maze.clearance({p.x, p.y}) >= sim::kRobotRadius - 1e-9);
    }
  }
}

TEST_CASE("property: the forward reading shrinks while approaching a wall") {
  const auto m = open_with({{{0.9, 0.0}, {0.9, 1.0}}});
  Pose p{0.2, 0.5, 0.0};
  double last = sim::sense(m, p)[2];
  for (int s = 0; s < 40; ++s) {
    const auto next = sim::step(m, p, Controls{0.0, 0.0});
    if (next == p) break;
    p = next;
    const double r = sim::sense(m, p)[2];
    if (last < 1.0) CHECK(r < last);
    last = r;
  }
  CHECK(last < 0.1);
}
