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

#include "brainforge/cppn/cppn.hpp"
#include "brainforge/random.hpp"

namespace brainforge::cppn {

struct MutationConfig {
  double p_perturb_genome = 0.8;
  double p_perturb_each = 0.1;
  double sigma_evolved = 0.2;    // evolved and orbit_weight connections
  double sigma_geometry = 0.02;  // geometry connections (they encode positions)
  bool mutate_sharpness = false;
  double p_add_connection = 0.15;
  double p_add_node = 0.05;
  double p_change_activation = 0.05;

  // Throws Error(kInvalidArgument) on probabilities outside [0, 1] or
  // non-positive standard deviations.
  void check() const;

  // Every probability zeroed: mutate() becomes the identity.
  static MutationConfig none();
};

// Applies, in order and each with its own probability: weight perturbation,
// add_connection, add_node, change_activation. Draws are consumed from `rng`
// in a fixed sequence, so a given stream state always yields the same child.
// The result is always a valid, acyclic Cppn.
Cppn mutate(const Cppn& parent, RandomStream& rng, const MutationConfig& config);

namespace ops {
void perturb_weights(Cppn& cppn, RandomStream& rng, const MutationConfig& config);
bool add_connection(Cppn& cppn, RandomStream& rng);
bool add_node(Cppn& cppn, RandomStream& rng);
bool change_activation(Cppn& cppn, RandomStream& rng);
}  // namespace ops

}  // namespace brainforge::cppn
