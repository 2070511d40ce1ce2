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

#include "brainforge/ann/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "brainforge/error.hpp"

namespace brainforge::ann {

std::string_view role_name(Role role) {
  switch (role) {
    case Role::kInput: return "input";
    case Role::kBias: return "bias";
    case Role::kHidden: return "hidden";
    case Role::kOutput: return "output";
  }
  return "unknown";
}

std::optional<Role> parse_role(std::string_view name) {
  if (name == "input") return Role::kInput;
  if (name == "bias") return Role::kBias;
  if (name == "hidden") return Role::kHidden;
  if (name == "output") return Role::kOutput;
  return std::nullopt;
}

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

const Neuron* NetworkPhenotype::find_neuron(std::string_view id) const {
  for (const auto& n : neurons) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

const Connection* NetworkPhenotype::find_connection(std::string_view src,
                                                    std::string_view dst) const {
  for (const auto& c : connections) {
    if (c.src == src && c.dst == dst) return &c;
  }
  return nullptr;
}

bool weight_in_range(double weight) {
  const double m = std::fabs(weight);
  return std::isfinite(weight) && m >= kMinWeightMagnitude && m <= kMaxWeight;
}

namespace {

bool position_in_range(Vec2 p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && p.x >= -1.0 && p.x <= 1.0 &&
         p.y >= -1.0 && p.y <= 1.0;
}

std::string key_text(std::string_view src, std::string_view dst) {
  std::string s(src);
  s += "->";
  s += dst;
  return s;
}

void check_order(const NetworkPhenotype& net, const std::vector<std::string>& order, Role role,
                 std::string_view list_name, std::vector<Violation>& out) {
  std::set<std::string> seen;
  for (const auto& id : order) {
    const Neuron* n = net.find_neuron(id);
    if (n == nullptr || n->role != role) {
      out.push_back({std::string(list_name), "order-coverage",
                     "'" + id + "' is not a " + std::string(role_name(role)) + " neuron"});
    }
    if (!seen.insert(id).second) {
      out.push_back({std::string(list_name), "order-duplicate", "'" + id + "' listed twice"});
    }
  }
  for (const auto& n : net.neurons) {
    if (n.role == role && !seen.contains(n.id)) {
      out.push_back({std::string(list_name), "order-coverage",
                     "'" + n.id + "' missing from " + std::string(list_name)});
    }
  }
}

}  // namespace

std::vector<Violation> validate(const NetworkPhenotype& net) {
  std::vector<Violation> out;
  std::unordered_map<std::string, const Neuron*> by_id;
  int bias_count = 0;
  for (const auto& n : net.neurons) {
    if (!by_id.emplace(n.id, &n).second) {
      out.push_back({n.id, "unique-id", "neuron id '" + n.id + "' is duplicated"});
    }
    if (!position_in_range(n.position)) {
      out.push_back({n.id, "position-range", "position outside [-1, 1]^2"});
    }
    if (n.role == Role::kBias) ++bias_count;
  }
  if (bias_count != 1) {
    out.push_back({"network", "single-bias",
                   "expected exactly one bias neuron, found " + std::to_string(bias_count)});
  }
  for (std::size_t i = 0; i < net.neurons.size(); ++i) {
    for (std::size_t j = i + 1; j < net.neurons.size(); ++j) {
      const auto& a = net.neurons[i];
      const auto& b = net.neurons[j];
      const double d = distance(a.position, b.position);
      if (d < kMinNeuronSeparation) {
        std::ostringstream msg;
        msg << "neurons '" << a.id << "' and '" << b.id << "' are " << d
            << " apart, below delta_min " << kMinNeuronSeparation;
        out.push_back({a.id, "min-separation", msg.str()});
      }
    }
  }
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& c : net.connections) {
    const std::string name = key_text(c.src, c.dst);
    auto src = by_id.find(c.src);
    auto dst = by_id.find(c.dst);
    if (src == by_id.end() || dst == by_id.end()) {
      out.push_back({name, "dangling-endpoint", "connection references an unknown neuron"});
    } else if (!is_target_role(dst->second->role)) {
      out.push_back({name, "target-role",
                     "destination role '" + std::string(role_name(dst->second->role)) +
                         "' cannot receive connections"});
    }
    if (!weight_in_range(c.weight)) {
      std::ostringstream msg;
      msg << "weight " << c.weight << " outside the range +-[" << kMinWeightMagnitude << ", "
          << kMaxWeight << "]";
      out.push_back({name, "weight-range", msg.str()});
    }
    if (!pairs.emplace(c.src, c.dst).second) {
      out.push_back({name, "unique-connection", "duplicate connection"});
    }
  }
  check_order(net, net.input_order, Role::kInput, "input_order", out);
  check_order(net, net.output_order, Role::kOutput, "output_order", out);
  return out;
}

void require_valid(const NetworkPhenotype& network) {
  const auto violations = validate(network);
  if (violations.empty()) return;
  std::string detail;
  for (const auto& v : violations) {
    if (!detail.empty()) detail += "; ";
    detail += v.element + ": " + v.message;
  }
  throw Error(ErrorCode::kInvalidArgument, "invalid network", detail);
}

std::string fresh_neuron_id(const NetworkPhenotype& network, std::string_view prefix) {
  for (int n = 1;; ++n) {
    std::string candidate = std::string(prefix) + std::to_string(n);
    if (network.find_neuron(candidate) == nullptr) return candidate;
  }
}

std::string resolve_new_neuron_id(const NetworkPhenotype& network, const edit::AddNeuron& add) {
  return add.id ? *add.id : fresh_neuron_id(network, "h");
}

namespace {

void require_position(const NetworkPhenotype& net, Vec2 p, std::string_view ignore_id) {
  if (!position_in_range(p)) {
    throw Error(ErrorCode::kInvalidArgument, "position outside [-1, 1]^2");
  }
  for (const auto& n : net.neurons) {
    if (n.id == ignore_id) continue;
    if (distance(n.position, p) < kMinNeuronSeparation) {
      throw Error(ErrorCode::kInvalidArgument, "position collides with another neuron",
                  "within delta_min of '" + n.id + "'");
    }
  }
}

const Neuron& require_neuron(const NetworkPhenotype& net, std::string_view id) {
  const Neuron* n = net.find_neuron(id);
  if (n == nullptr) throw Error(ErrorCode::kNotFound, "unknown neuron", std::string(id));
  return *n;
}

void require_weight(double w) {
  if (!weight_in_range(w)) {
    std::ostringstream msg;
    msg << w;
    throw Error(ErrorCode::kInvalidArgument, "weight out of range", msg.str());
  }
}

std::vector<Connection>::iterator require_connection(NetworkPhenotype& net,
                                                     std::string_view src,
                                                     std::string_view dst) {
  auto it = std::find_if(net.connections.begin(), net.connections.end(),
                         [&](const Connection& c) { return c.src == src && c.dst == dst; });
  if (it == net.connections.end()) {
    throw Error(ErrorCode::kNotFound, "unknown connection", key_text(src, dst));
  }
  return it;
}

struct EditApplier {
  NetworkPhenotype& net;

  void operator()(const edit::AddNeuron& e) {
    if (e.role != Role::kHidden) {
      throw Error(ErrorCode::kInvalidArgument,
                  "only hidden neurons can be added; the task interface is fixed",
                  std::string(role_name(e.role)));
    }
    const std::string id = resolve_new_neuron_id(net, e);
    if (net.find_neuron(id) != nullptr) {
      throw Error(ErrorCode::kConflict, "neuron id already in use", id);
    }
    require_position(net, e.position, {});
    net.neurons.push_back({id, e.role, e.position});
  }

  void operator()(const edit::RemoveNeuron& e) {
    const Neuron& n = require_neuron(net, e.id);
    if (n.role != Role::kHidden) {
      throw Error(ErrorCode::kInvalidArgument,
                  "input, output and bias neurons cannot be removed", e.id);
    }
    std::erase_if(net.connections,
                  [&](const Connection& c) { return c.src == e.id || c.dst == e.id; });
    std::erase_if(net.neurons, [&](const Neuron& x) { return x.id == e.id; });
  }

  void operator()(const edit::MoveNeuron& e) {
    require_neuron(net, e.id);
    require_position(net, e.position, e.id);
    for (auto& n : net.neurons) {
      if (n.id == e.id) n.position = e.position;
    }
  }

  void operator()(const edit::AddConnection& e) {
    require_neuron(net, e.src);
    const Neuron& dst = require_neuron(net, e.dst);
    if (!is_target_role(dst.role)) {
      throw Error(ErrorCode::kInvalidArgument, "destination cannot receive connections",
                  e.dst);
    }
    require_weight(e.weight);
    if (net.find_connection(e.src, e.dst) != nullptr) {
      throw Error(ErrorCode::kConflict, "connection already exists", key_text(e.src, e.dst));
    }
    net.connections.push_back({e.src, e.dst, e.weight});
  }

  void operator()(const edit::RemoveConnection& e) {
    net.connections.erase(require_connection(net, e.src, e.dst));
  }

  void operator()(const edit::SetWeight& e) {
    auto it = require_connection(net, e.src, e.dst);
    require_weight(e.weight);
    it->weight = e.weight;
  }
};

}  // namespace

NetworkPhenotype apply_edit(const NetworkPhenotype& network, const NetworkEdit& edit) {
  require_valid(network);
  NetworkPhenotype result = network;
  std::visit(EditApplier{result}, edit);
  return result;
}

NetworkDiff diff_networks(const NetworkPhenotype& expected, const NetworkPhenotype& actual) {
  NetworkDiff diff;
  std::map<std::string, const Neuron*> actual_neurons;
  for (const auto& n : actual.neurons) actual_neurons[n.id] = &n;
  for (const auto& n : expected.neurons) {
    auto it = actual_neurons.find(n.id);
    if (it == actual_neurons.end()) {
      diff.neuron_mismatches.push_back(n.id + ": missing");
    } else {
      if (!(*it->second == n)) diff.neuron_mismatches.push_back(n.id + ": differs");
      actual_neurons.erase(it);
    }
  }
  for (const auto& [id, n] : actual_neurons) diff.neuron_mismatches.push_back(id + ": extra");
  if (expected.input_order != actual.input_order) {
    diff.neuron_mismatches.push_back("input_order differs");
  }
  if (expected.output_order != actual.output_order) {
    diff.neuron_mismatches.push_back("output_order differs");
  }

  std::map<ConnectionKey, double> actual_weights;
  for (const auto& c : actual.connections) actual_weights[c.key()] = c.weight;
  for (const auto& c : expected.connections) {
    auto it = actual_weights.find(c.key());
    if (it == actual_weights.end()) {
      diff.missing.push_back(c.key());
      continue;
    }
    diff.max_weight_error = std::max(diff.max_weight_error, std::fabs(it->second - c.weight));
    actual_weights.erase(it);
  }
  for (const auto& [key, w] : actual_weights) diff.spurious.push_back(key);
  return diff;
}

}  // namespace brainforge::ann
