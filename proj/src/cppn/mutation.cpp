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

#include "brainforge/cppn/mutation.hpp"

#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "brainforge/error.hpp"

namespace brainforge::cppn {

void MutationConfig::check() const {
  for (double p : {p_perturb_genome, p_perturb_each, p_add_connection, p_add_node,
                   p_change_activation}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "mutation probability outside [0, 1]");
    }
  }
  if (!(sigma_evolved > 0.0) || !(sigma_geometry > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "mutation standard deviations must be positive");
  }
}

MutationConfig MutationConfig::none() {
  MutationConfig c;
  c.p_perturb_genome = 0.0;
  c.p_perturb_each = 0.0;
  c.p_add_connection = 0.0;
  c.p_add_node = 0.0;
  c.p_change_activation = 0.0;
  return c;
}

namespace ops {

void perturb_weights(Cppn& cppn, RandomStream& rng, const MutationConfig& config) {
  for (auto& c : cppn.connections) {
    if (!rng.bernoulli(config.p_perturb_each)) continue;
    double sigma = 0.0;
    switch (c.tag) {
      case ConnectionTag::kEvolved:
      case ConnectionTag::kOrbitWeight: sigma = config.sigma_evolved; break;
      case ConnectionTag::kGeometry: sigma = config.sigma_geometry; break;
      case ConnectionTag::kSharpness:
        if (config.mutate_sharpness) sigma = config.sigma_evolved;
        break;
      case ConnectionTag::kOrbitLink: break;  // detector-to-orbit links stay at 1
    }
    if (sigma > 0.0) c.weight += sigma * rng.normal();
  }
}

namespace {

// True when `to` is reachable from `from` along connections.
bool reaches(const Cppn& cppn, const std::string& from, const std::string& to) {
  std::unordered_map<std::string_view, std::vector<std::string_view>> out;
  for (const auto& c : cppn.connections) out[c.src].push_back(c.dst);
  std::unordered_set<std::string_view> seen{from};
  std::vector<std::string_view> stack{from};
  while (!stack.empty()) {
    const std::string_view id = stack.back();
    stack.pop_back();
    if (id == to) return true;
    for (auto next : out[id]) {
      if (seen.insert(next).second) stack.push_back(next);
    }
  }
  return false;
}

constexpr int kPairAttempts = 32;

}  // namespace

bool add_connection(Cppn& cppn, RandomStream& rng) {
  const std::size_t n = cppn.nodes.size();
  for (int attempt = 0; attempt < kPairAttempts; ++attempt) {
    const CppnNode& src = cppn.nodes[rng.index(n)];
    const CppnNode& dst = cppn.nodes[rng.index(n)];
    if (src.id == dst.id || src.id == kOutputId || is_input_id(dst.id)) continue;
    if (cppn.find_connection(src.id, dst.id) != nullptr) continue;
    if (reaches(cppn, dst.id, src.id)) continue;
    const double weight = rng.normal();
    cppn.connections.push_back({src.id, dst.id, weight, ConnectionTag::kEvolved});
    return true;
  }
  return false;
}

bool add_node(Cppn& cppn, RandomStream& rng) {
  if (cppn.connections.empty()) return false;
  const std::size_t pick = rng.index(cppn.connections.size());
  const NodeFunction function = kAllFunctions[rng.index(kAllFunctions.size())];
  const CppnConnection old = cppn.connections[pick];
  const std::string id = fresh_node_id(cppn);
  cppn.nodes.push_back({id, function, NodeTag::kEvolved});
  // The downstream half keeps the old slot so the destination's summation
  // order is unchanged.
  cppn.connections[pick] = {id, old.dst, old.weight, old.tag};
  cppn.connections.push_back({old.src, id, 1.0, ConnectionTag::kEvolved});
  return true;
}

bool change_activation(Cppn& cppn, RandomStream& rng) {
  std::vector<CppnNode*> evolved;
  for (auto& node : cppn.nodes) {
    if (node.tag == NodeTag::kEvolved) evolved.push_back(&node);
  }
  if (evolved.empty()) return false;
  CppnNode& node = *evolved[rng.index(evolved.size())];
  std::vector<NodeFunction> others;
  for (NodeFunction f : kAllFunctions) {
    if (f != node.function) others.push_back(f);
  }
  node.function = others[rng.index(others.size())];
  return true;
}

}  // namespace ops

Cppn mutate(const Cppn& parent, RandomStream& rng, const MutationConfig& config) {
  config.check();
  Cppn child = parent;
  if (rng.bernoulli(config.p_perturb_genome)) ops::perturb_weights(child, rng, config);
  if (rng.bernoulli(config.p_add_connection)) ops::add_connection(child, rng);
  if (rng.bernoulli(config.p_add_node)) ops::add_node(child, rng);
  if (rng.bernoulli(config.p_change_activation)) ops::change_activation(child, rng);
  return child;
}

}  // namespace brainforge::cppn
