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

#include "brainforge/ann/network.hpp"

namespace brainforge::ann {

// Index-compiled form of a phenotype for repeated stepping. Activations
// persist between calls to step(); every hidden and output neuron starts at 0.
//
// One step is a synchronous update: inputs are clamped to the supplied values,
// the bias reads 1, and every hidden/output neuron becomes
// tanh(sum of weight * source activation from the previous step).
class NetworkRunner {
 public:
  explicit NetworkRunner(const NetworkPhenotype& network);

  std::size_t input_count() const { return input_index_.size(); }
  std::size_t output_count() const { return output_index_.size(); }

  // Returns the output activations after the update, in output_order.
  std::span<const double> step(std::span<const double> inputs);

  void reset();

 private:
  struct Incoming {
    std::size_t src;
    double weight;
  };

  std::vector<std::size_t> input_index_;
  std::vector<std::size_t> output_index_;
  std::vector<std::size_t> bias_index_;
  std::vector<std::size_t> targets_;                 // hidden/output neuron indices
  std::vector<std::vector<Incoming>> incoming_;      // parallel to targets_
  std::vector<double> state_;
  std::vector<double> next_;
  std::vector<double> outputs_;
};

// Runs `steps` synchronous updates from rest with the inputs held fixed.
// Inputs must match input_order in length; throws Error otherwise.
std::vector<double> activate(const NetworkPhenotype& network, std::span<const double> inputs,
                             int steps);

}  // namespace brainforge::ann
