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
#include <string>
#include <vector>

#include "brainforge/ann/network.hpp"
#include "brainforge/cppn/cppn.hpp"

namespace brainforge::substrate {

// Positioned neurons a CPPN is queried over; a phenotype without connections.
struct Substrate {
  std::vector<ann::Neuron> neurons;
  std::vector<std::string> input_order;
  std::vector<std::string> output_order;

  friend bool operator==(const Substrate&, const Substrate&) = default;
};

struct DecodeConfig {
  double expression_threshold = 0.01;
  double weight_cap = 3.0;
  void check() const;
};

struct DecodeStats {
  std::size_t queries = 0;
};

Substrate substrate_from_phenotype(const ann::NetworkPhenotype& phenotype);

// Throws Error(kInvalidArgument) when the neurons break phenotype invariants.
void check_substrate(const Substrate& substrate);

// Every (source, target) pair in source-major substrate order, with targets
// restricted to hidden and output neurons.
struct PairList {
  std::vector<std::size_t> src;
  std::vector<std::size_t> dst;
  std::size_t size() const { return src.size(); }
};
PairList queryable_pairs(const Substrate& substrate);

// Queries the CPPN at every queryable pair and expresses connections whose
// magnitude reaches the threshold, clamped to the cap and floored to the
// phenotype's minimum magnitude.
ann::NetworkPhenotype decode(const cppn::Cppn& cppn, const Substrate& substrate,
                             const DecodeConfig& config = {}, DecodeStats* stats = nullptr);

}  // namespace brainforge::substrate
