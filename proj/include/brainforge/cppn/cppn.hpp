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

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace brainforge::cppn {

enum class NodeFunction {
  kLinear,        // z
  kSigmoidSteep,  // 1 / (1 + exp(-4.9 z))
  kSine,          // sin z
  kGaussian,      // exp(-z^2)
  kAbs,           // |z|
  kSquare,        // z^2
  kInvExp,        // exp(-max(z, 0))
};

inline constexpr std::array<NodeFunction, 7> kAllFunctions = {
    NodeFunction::kLinear, NodeFunction::kSigmoidSteep, NodeFunction::kSine,
    NodeFunction::kGaussian, NodeFunction::kAbs, NodeFunction::kSquare,
    NodeFunction::kInvExp};

inline constexpr double kSigmoidSteepness = 4.9;

double apply_function(NodeFunction function, double z);
std::string_view function_name(NodeFunction function);
std::optional<NodeFunction> parse_function(std::string_view name);

// Provenance markers. The compiler emits geometry/sharpness_target/orbit_sum
// nodes; mutation only ever creates `evolved` ones.
enum class NodeTag { kIo, kGeometry, kSharpnessTarget, kOrbitSum, kEvolved };
enum class ConnectionTag { kGeometry, kSharpness, kOrbitLink, kOrbitWeight, kEvolved };

std::string_view node_tag_name(NodeTag tag);
std::optional<NodeTag> parse_node_tag(std::string_view name);
std::string_view connection_tag_name(ConnectionTag tag);
std::optional<ConnectionTag> parse_connection_tag(std::string_view name);

struct CppnNode {
  std::string id;
  NodeFunction function = NodeFunction::kLinear;
  NodeTag tag = NodeTag::kEvolved;
  friend bool operator==(const CppnNode&, const CppnNode&) = default;
};

struct CppnConnection {
  std::string src;
  std::string dst;
  double weight = 0.0;
  ConnectionTag tag = ConnectionTag::kEvolved;
  friend bool operator==(const CppnConnection&, const CppnConnection&) = default;
};

// Reserved ids: inputs (x1, y1, x2, y2, bias) and the single weight output.
inline constexpr std::array<std::string_view, 5> kInputIds = {"in0", "in1", "in2", "in3", "in4"};
inline constexpr std::string_view kOutputId = "out0";
inline constexpr std::size_t kBiasInput = 4;

struct Cppn {
  std::vector<CppnNode> nodes;
  std::vector<CppnConnection> connections;

  // Just the five inputs and the linear output, unconnected.
  static Cppn empty();

  const CppnNode* find_node(std::string_view id) const;
  CppnNode* find_node(std::string_view id);
  const CppnConnection* find_connection(std::string_view src, std::string_view dst) const;
  CppnConnection* find_connection(std::string_view src, std::string_view dst);

  friend bool operator==(const Cppn&, const Cppn&) = default;
};

bool is_input_id(std::string_view id);

// Natural ordering for generated ids: "n2" < "n10".
bool node_id_less(std::string_view a, std::string_view b);

// "n<k>" with k one past the largest numeric suffix among existing n-ids.
std::string fresh_node_id(const Cppn& cppn);

// Throws Error (kSchema for structural problems, kCycle for cycles).
void check_cppn(const Cppn& cppn);

// Every connection's source precedes its destination; ready nodes are
// emitted in node_id_less order. Throws Error(kCycle) naming the cycle.
std::vector<std::string> topological_order(const Cppn& cppn);

struct QueryPoint {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;
};

// Compiled evaluation plan. Batched queries run one node at a time across all
// lanes; the per-lane arithmetic is identical to a single query, so batch and
// single-point results agree bit for bit.
class CppnEvaluator {
 public:
  explicit CppnEvaluator(const Cppn& cppn);

  double query(const QueryPoint& point) const;

  // Each span holds one coordinate per lane; all spans share a length.
  void query_batch(std::span<const double> x1, std::span<const double> y1,
                   std::span<const double> x2, std::span<const double> y2,
                   std::span<double> out) const;

  std::size_t active_node_count() const { return plan_.size(); }

 private:
  struct Incoming {
    std::size_t src;  // slot index
    double weight;
  };
  struct Step {
    NodeFunction function;
    int input = -1;  // coordinate index 0..4 for input nodes
    std::vector<Incoming> incoming;
  };
  std::vector<Step> plan_;  // only ancestors of the output, topologically ordered
  std::size_t output_slot_ = 0;
};

double query(const Cppn& cppn, const QueryPoint& point);

}  // namespace brainforge::cppn
