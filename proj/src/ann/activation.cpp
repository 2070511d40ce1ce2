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

#include "brainforge/ann/activation.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "brainforge/error.hpp"

namespace brainforge::ann {

NetworkRunner::NetworkRunner(const NetworkPhenotype& network) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < network.neurons.size(); ++i) {
    const Neuron& n = network.neurons[i];
    index.emplace(n.id, i);
    if (n.role == Role::kBias) bias_index_.push_back(i);
  }
  auto lookup = [&](const std::string& id) {
    auto it = index.find(id);
    if (it == index.end()) throw Error(ErrorCode::kInvalidArgument, "unknown neuron", id);
    return it->second;
  };
  for (const auto& id : network.input_order) input_index_.push_back(lookup(id));
  for (const auto& id : network.output_order) output_index_.push_back(lookup(id));

  std::vector<std::ptrdiff_t> target_slot(network.neurons.size(), -1);
  for (std::size_t i = 0; i < network.neurons.size(); ++i) {
    if (is_target_role(network.neurons[i].role)) {
      target_slot[i] = static_cast<std::ptrdiff_t>(targets_.size());
      targets_.push_back(i);
    }
  }
  incoming_.resize(targets_.size());
  for (const auto& c : network.connections) {
    const std::size_t dst = lookup(c.dst);
    if (target_slot[dst] < 0) {
      throw Error(ErrorCode::kInvalidArgument, "connection into a non-target neuron", c.dst);
    }
    incoming_[static_cast<std::size_t>(target_slot[dst])].push_back({lookup(c.src), c.weight});
  }
  state_.assign(network.neurons.size(), 0.0);
  next_.assign(targets_.size(), 0.0);
  outputs_.assign(output_index_.size(), 0.0);
  reset();
}

void NetworkRunner::reset() {
  std::fill(state_.begin(), state_.end(), 0.0);
  for (std::size_t b : bias_index_) state_[b] = 1.0;
}

std::span<const double> NetworkRunner::step(std::span<const double> inputs) {
  if (inputs.size() != input_index_.size()) {
    throw Error(ErrorCode::kArity, "input length mismatch",
                "expected " + std::to_string(input_index_.size()) + ", got " +
                    std::to_string(inputs.size()));
  }
  for (std::size_t k = 0; k < inputs.size(); ++k) state_[input_index_[k]] = inputs[k];
  for (std::size_t t = 0; t < targets_.size(); ++t) {
    double sum = 0.0;
    for (const Incoming& in : incoming_[t]) sum += in.weight * state_[in.src];
    next_[t] = std::tanh(sum);
  }
  for (std::size_t t = 0; t < targets_.size(); ++t) state_[targets_[t]] = next_[t];
  for (std::size_t k = 0; k < output_index_.size(); ++k) outputs_[k] = state_[output_index_[k]];
  return outputs_;
}

std::vector<double> activate(const NetworkPhenotype& network, std::span<const double> inputs,
                             int steps) {
  if (steps < 1) throw Error(ErrorCode::kInvalidArgument, "steps must be positive");
  require_valid(network);
  NetworkRunner runner(network);
  std::span<const double> out;
  for (int s = 0; s < steps; ++s) out = runner.step(inputs);
  return {out.begin(), out.end()};
}

}  // namespace brainforge::ann
