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

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace brainforge::ann {

inline constexpr double kMinNeuronSeparation = 0.05;
inline constexpr double kMaxWeight = 3.0;
inline constexpr double kMinWeightMagnitude = 0.05;

enum class Role { kInput, kBias, kHidden, kOutput };

std::string_view role_name(Role role);
std::optional<Role> parse_role(std::string_view name);

// Roles that may receive connections.
inline bool is_target_role(Role role) { return role == Role::kHidden || role == Role::kOutput; }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double distance(Vec2 a, Vec2 b);

struct Neuron {
  std::string id;
  Role role = Role::kHidden;
  Vec2 position;
  friend bool operator==(const Neuron&, const Neuron&) = default;
};

struct ConnectionKey {
  std::string src;
  std::string dst;
  friend auto operator<=>(const ConnectionKey&, const ConnectionKey&) = default;
};

struct Connection {
  std::string src;
  std::string dst;
  double weight = 0.0;
  ConnectionKey key() const { return {src, dst}; }
  friend bool operator==(const Connection&, const Connection&) = default;
};

// The editable network. Neuron and connection order is preserved and is
// significant for serialization and for the accumulation order in activate.
struct NetworkPhenotype {
  std::vector<Neuron> neurons;
  std::vector<Connection> connections;
  std::vector<std::string> input_order;
  std::vector<std::string> output_order;

  const Neuron* find_neuron(std::string_view id) const;
  const Connection* find_connection(std::string_view src, std::string_view dst) const;

  friend bool operator==(const NetworkPhenotype&, const NetworkPhenotype&) = default;
};

bool weight_in_range(double weight);

struct Violation {
  std::string element;  // offending neuron id, "src->dst", or list name
  std::string rule;     // short rule tag, e.g. "min-separation"
  std::string message;
};

// Reports every broken invariant; empty iff the network is well formed.
std::vector<Violation> validate(const NetworkPhenotype& network);

// Throws Error(kInvalidArgument) listing the violations, if any.
void require_valid(const NetworkPhenotype& network);

namespace edit {
struct AddNeuron {
  Role role = Role::kHidden;
  Vec2 position;
  std::optional<std::string> id;  // generated when absent
  friend bool operator==(const AddNeuron&, const AddNeuron&) = default;
};
struct RemoveNeuron {
  std::string id;
  friend bool operator==(const RemoveNeuron&, const RemoveNeuron&) = default;
};
struct MoveNeuron {
  std::string id;
  Vec2 position;
  friend bool operator==(const MoveNeuron&, const MoveNeuron&) = default;
};
struct AddConnection {
  std::string src;
  std::string dst;
  double weight = 0.0;
  friend bool operator==(const AddConnection&, const AddConnection&) = default;
};
struct RemoveConnection {
  std::string src;
  std::string dst;
  friend bool operator==(const RemoveConnection&, const RemoveConnection&) = default;
};
struct SetWeight {
  std::string src;
  std::string dst;
  double weight = 0.0;
  friend bool operator==(const SetWeight&, const SetWeight&) = default;
};
}  // namespace edit

using NetworkEdit = std::variant<edit::AddNeuron, edit::RemoveNeuron, edit::MoveNeuron,
                                 edit::AddConnection, edit::RemoveConnection, edit::SetWeight>;

// Smallest "<prefix><n>" (n >= 1) not already used as a neuron id.
std::string fresh_neuron_id(const NetworkPhenotype& network, std::string_view prefix);

// Id an AddNeuron edit will receive when applied to `network`.
std::string resolve_new_neuron_id(const NetworkPhenotype& network, const edit::AddNeuron& add);

// Returns the edited copy. The input and output neurons form the fixed task
// interface: they can be moved but not added or removed, and the bias neuron
// is unique. Throws Error on unknown ids, range or separation violations.
NetworkPhenotype apply_edit(const NetworkPhenotype& network, const NetworkEdit& edit);

// Weight-level comparison of two networks over the same neurons.
struct NetworkDiff {
  double max_weight_error = 0.0;
  std::vector<ConnectionKey> missing;   // in expected, absent from actual
  std::vector<ConnectionKey> spurious;  // in actual, absent from expected
  std::vector<std::string> neuron_mismatches;

  bool matches(double tolerance) const {
    return missing.empty() && spurious.empty() && neuron_mismatches.empty() &&
           max_weight_error <= tolerance;
  }
};

NetworkDiff diff_networks(const NetworkPhenotype& expected, const NetworkPhenotype& actual);

}  // namespace brainforge::ann
