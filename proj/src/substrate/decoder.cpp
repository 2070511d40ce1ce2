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

#include "brainforge/substrate/decoder.hpp"

#include <algorithm>
#include <cmath>

#include "brainforge/error.hpp"

namespace brainforge::substrate {

void DecodeConfig::check() const {
  if (!(expression_threshold > 0.0 && expression_threshold < weight_cap)) {
    throw Error(ErrorCode::kInvalidArgument, "decode requires 0 < threshold < weight cap");
  }
  if (weight_cap > ann::kMaxWeight) {
    throw Error(ErrorCode::kInvalidArgument, "weight cap exceeds the phenotype weight range");
  }
}

Substrate substrate_from_phenotype(const ann::NetworkPhenotype& phenotype) {
  return {phenotype.neurons, phenotype.input_order, phenotype.output_order};
}

void check_substrate(const Substrate& substrate) {
  ann::NetworkPhenotype bare{substrate.neurons, {}, substrate.input_order, substrate.output_order};
  ann::require_valid(bare);
}

PairList queryable_pairs(const Substrate& substrate) {
  PairList pairs;
  const auto& neurons = substrate.neurons;
  for (std::size_t a = 0; a < neurons.size(); ++a) {
    for (std::size_t b = 0; b < neurons.size(); ++b) {
      if (!ann::is_target_role(neurons[b].role)) continue;
      pairs.src.push_back(a);
      pairs.dst.push_back(b);
    }
  }
  return pairs;
}

ann::NetworkPhenotype decode(const cppn::Cppn& cppn, const Substrate& substrate,
                             const DecodeConfig& config, DecodeStats* stats) {
  config.check();
  check_substrate(substrate);
  const cppn::CppnEvaluator evaluator(cppn);
  const PairList pairs = queryable_pairs(substrate);
  const std::size_t n = pairs.size();
  std::vector<double> x1(n), y1(n), x2(n), y2(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = substrate.neurons[pairs.src[i]].position;
    const auto& b = substrate.neurons[pairs.dst[i]].position;
    x1[i] = a.x;
    y1[i] = a.y;
    x2[i] = b.x;
    y2[i] = b.y;
  }
  evaluator.query_batch(x1, y1, x2, y2, w);
  if (stats != nullptr) stats->queries += n;

  ann::NetworkPhenotype out{substrate.neurons, {}, substrate.input_order, substrate.output_order};
  for (std::size_t i = 0; i < n; ++i) {
    const double value = w[i];
    if (std::isnan(value) || std::fabs(value) < config.expression_threshold) continue;
    double weight = std::clamp(value, -config.weight_cap, config.weight_cap);
    if (std::fabs(weight) < ann::kMinWeightMagnitude) {
      weight = std::copysign(ann::kMinWeightMagnitude, weight);
    }
    out.connections.push_back({substrate.neurons[pairs.src[i]].id,
                               substrate.neurons[pairs.dst[i]].id, weight});
  }
  return out;
}

}  // namespace brainforge::substrate
