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

#include <optional>
#include <string>

#include "brainforge/ann/network.hpp"
#include "brainforge/compiler/annotations.hpp"
#include "brainforge/random.hpp"
#include "brainforge/sim/maze.hpp"

namespace brainforge::testing {

// Random annotated network on a jittered grid: at most 20 neurons and 40
// connections after expansion, weights uniform in +-[0.05, 3]. Annotations are
// attempted with the given probability and dropped when their expansion is
// invalid, so the result always expands cleanly.
compiler::AnnotatedNetwork random_annotated_network(RandomStream& rng,
                                                    double annotation_probability = 0.5);

// Keeps drawing until the expansion has at least one orbit with two or more
// members.
compiler::AnnotatedNetwork random_orbit_network(RandomStream& rng);

// A random edit that apply_edit accepts on `net`.
ann::NetworkEdit random_valid_edit(const ann::NetworkPhenotype& net, RandomStream& rng);

// Annotated network over the maze robot's substrate with random connections
// and, sometimes, a MirrorX annotation.
compiler::AnnotatedNetwork random_maze_brain(RandomStream& rng);

// Maze with a few random interior walls and a start clear of them.
sim::Maze random_maze(RandomStream& rng);

// One input -> one output, plus the bias, for small activation checks.
ann::NetworkPhenotype tiny_network(double weight);

double uniform(RandomStream& rng, double lo, double hi);

}  // namespace brainforge::testing
