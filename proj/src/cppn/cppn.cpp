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

#include "brainforge/cppn/cppn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "brainforge/error.hpp"
#include "brainforge/simd/kernels.hpp"

namespace brainforge::cppn {

double apply_function(NodeFunction function, double z) {
  switch (function) {
    case NodeFunction::kLinear: return z;
    case NodeFunction::kSigmoidSteep: return 1.0 / (1.0 + std::exp(-kSigmoidSteepness * z));
    case NodeFunction::kSine: return std::sin(z);
    case NodeFunction::kGaussian: return std::exp(-(z * z));
    case NodeFunction::kAbs: return std::fabs(z);
    case NodeFunction::kSquare: return z * z;
    case NodeFunction::kInvExp: return std::exp(-std::max(z, 0.0));
  }
  return z;
}

std::string_view function_name(NodeFunction function) {
  switch (function) {
    case NodeFunction::kLinear: return "linear";
    case NodeFunction::kSigmoidSteep: return "sigmoid_steep";
    case NodeFunction::kSine: return "sine";
    case NodeFunction::kGaussian: return "gaussian";
    case NodeFunction::kAbs: return "abs";
    case NodeFunction::kSquare: return "square";
    case NodeFunction::kInvExp: return "inv_exp";
  }
  return "linear";
}

std::optional<NodeFunction> parse_function(std::string_view name) {
  for (NodeFunction f : kAllFunctions) {
    if (function_name(f) == name) return f;
  }
  return std::nullopt;
}

namespace {
constexpr std::array<std::string_view, 5> kNodeTagNames = {"io", "geometry", "sharpness_target",
                                                           "orbit_sum", "evolved"};
constexpr std::array<std::string_view, 5> kConnectionTagNames = {
    "geometry", "sharpness", "orbit_link", "orbit_weight", "evolved"};
}  // namespace

std::string_view node_tag_name(NodeTag tag) { return kNodeTagNames[static_cast<int>(tag)]; }

std::optional<NodeTag> parse_node_tag(std::string_view name) {
  for (std::size_t i = 0; i < kNodeTagNames.size(); ++i) {
    if (kNodeTagNames[i] == name) return static_cast<NodeTag>(i);
  }
  return std::nullopt;
}

std::string_view connection_tag_name(ConnectionTag tag) {
  return kConnectionTagNames[static_cast<int>(tag)];
}

std::optional<ConnectionTag> parse_connection_tag(std::string_view name) {
  for (std::size_t i = 0; i < kConnectionTagNames.size(); ++i) {
    if (kConnectionTagNames[i] == name) return static_cast<ConnectionTag>(i);
  }
  return std::nullopt;
}

Cppn Cppn::empty() {
  Cppn c;
  for (auto id : kInputIds) c.nodes.push_back({std::string(id), NodeFunction::kLinear, NodeTag::kIo});
  c.nodes.push_back({std::string(kOutputId), NodeFunction::kLinear, NodeTag::kIo});
  return c;
}

const CppnNode* Cppn::find_node(std::string_view id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

CppnNode* Cppn::find_node(std::string_view id) {
  return const_cast<CppnNode*>(static_cast<const Cppn&>(*this).find_node(id));
}

const CppnConnection* Cppn::find_connection(std::string_view src, std::string_view dst) const {
  for (const auto& c : connections) {
    if (c.src == src && c.dst == dst) return &c;
  }
  return nullptr;
}

CppnConnection* Cppn::find_connection(std::string_view src, std::string_view dst) {
  return const_cast<CppnConnection*>(static_cast<const Cppn&>(*this).find_connection(src, dst));
}

bool is_input_id(std::string_view id) {
  return std::find(kInputIds.begin(), kInputIds.end(), id) != kInputIds.end();
}

namespace {

// Splits "abc123" into ("abc", 123); ids without a numeric tail get -1.
std::pair<std::string_view, long long> split_id(std::string_view id) {
  std::size_t cut = id.size();
  while (cut > 0 && id[cut - 1] >= '0' && id[cut - 1] <= '9') --cut;
  if (cut == id.size() || id.size() - cut > 15) return {id, -1};
  long long value = 0;
  std::from_chars(id.data() + cut, id.data() + id.size(), value);
  return {id.substr(0, cut), value};
}

}  // namespace

bool node_id_less(std::string_view a, std::string_view b) {
  const auto [pa, na] = split_id(a);
  const auto [pb, nb] = split_id(b);
  if (pa != pb) return pa < pb;
  if (na != nb) return na < nb;
  return a < b;
}

std::string fresh_node_id(const Cppn& cppn) {
  long long top = 0;
  for (const auto& n : cppn.nodes) {
    const auto [prefix, value] = split_id(n.id);
    if (prefix == "n") top = std::max(top, value);
  }
  return "n" + std::to_string(top + 1);
}

namespace {

struct IdLess {
  bool operator()(const std::string& a, const std::string& b) const {
    // std::priority_queue pops the largest element; invert for a min-queue.
    return node_id_less(b, a);
  }
};

}  // namespace

std::vector<std::string> topological_order(const Cppn& cppn) {
  std::unordered_map<std::string, int> indegree;
  std::unordered_map<std::string, std::vector<std::string>> out_edges;
  std::unordered_map<std::string, std::vector<std::string>> in_edges;
  for (const auto& n : cppn.nodes) indegree.emplace(n.id, 0);
  for (const auto& c : cppn.connections) {
    if (!indegree.contains(c.src) || !indegree.contains(c.dst)) {
      throw Error(ErrorCode::kSchema, "connection references an unknown node",
                  c.src + "->" + c.dst);
    }
    ++indegree[c.dst];
    out_edges[c.src].push_back(c.dst);
    in_edges[c.dst].push_back(c.src);
  }
  std::priority_queue<std::string, std::vector<std::string>, IdLess> ready;
  for (const auto& n : cppn.nodes) {
    if (indegree[n.id] == 0) ready.push(n.id);
  }
  std::vector<std::string> order;
  order.reserve(cppn.nodes.size());
  while (!ready.empty()) {
    std::string id = ready.top();
    ready.pop();
    for (const auto& next : out_edges[id]) {
      if (--indegree[next] == 0) ready.push(next);
    }
    order.push_back(std::move(id));
  }
  if (order.size() == cppn.nodes.size()) return order;

  // Every leftover node still has a leftover predecessor; walking predecessors
  // must revisit a node, and the revisited stretch is a cycle.
  std::string start;
  for (const auto& n : cppn.nodes) {
    if (indegree[n.id] > 0) {
      start = n.id;
      break;
    }
  }
  std::vector<std::string> path;
  std::unordered_map<std::string, std::size_t> seen_at;
  std::string cur = start;
  while (!seen_at.contains(cur)) {
    seen_at.emplace(cur, path.size());
    path.push_back(cur);
    for (const auto& pred : in_edges[cur]) {
      if (indegree[pred] > 0) {
        cur = pred;
        break;
      }
    }
  }
  std::vector<std::string> cycle(path.begin() + static_cast<std::ptrdiff_t>(seen_at[cur]),
                                 path.end());
  std::sort(cycle.begin(), cycle.end(),
            [](const std::string& a, const std::string& b) { return node_id_less(a, b); });
  std::string detail;
  for (const auto& id : cycle) {
    if (!detail.empty()) detail += ",";
    detail += id;
  }
  throw Error(ErrorCode::kCycle, "cppn contains a cycle", detail);
}

void check_cppn(const Cppn& cppn) {
  std::unordered_set<std::string> ids;
  int io_count = 0;
  for (const auto& n : cppn.nodes) {
    if (!ids.insert(n.id).second) throw Error(ErrorCode::kSchema, "duplicate node id", n.id);
    const bool reserved = is_input_id(n.id) || n.id == kOutputId;
    if (reserved != (n.tag == NodeTag::kIo)) {
      throw Error(ErrorCode::kSchema, "io tag must mark exactly the reserved nodes", n.id);
    }
    if (reserved) ++io_count;
    if (n.id == kOutputId && n.function != NodeFunction::kLinear) {
      throw Error(ErrorCode::kSchema, "output node must be linear");
    }
  }
  if (io_count != 6) {
    throw Error(ErrorCode::kSchema, "cppn needs inputs in0..in4 and output out0");
  }
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& c : cppn.connections) {
    if (is_input_id(c.dst)) {
      throw Error(ErrorCode::kSchema, "input nodes cannot receive connections", c.dst);
    }
    if (!std::isfinite(c.weight)) {
      throw Error(ErrorCode::kSchema, "non-finite connection weight", c.src + "->" + c.dst);
    }
    if (!pairs.emplace(c.src, c.dst).second) {
      throw Error(ErrorCode::kSchema, "duplicate connection", c.src + "->" + c.dst);
    }
  }
  topological_order(cppn);
}

CppnEvaluator::CppnEvaluator(const Cppn& cppn) {
  check_cppn(cppn);
  std::unordered_map<std::string, const CppnNode*> nodes;
  for (const auto& n : cppn.nodes) nodes.emplace(n.id, &n);
  std::unordered_map<std::string, std::vector<const CppnConnection*>> incoming;
  for (const auto& c : cppn.connections) incoming[c.dst].push_back(&c);

  // Restrict the plan to ancestors of the output.
  std::unordered_set<std::string> needed{std::string(kOutputId)};
  std::vector<std::string> stack{std::string(kOutputId)};
  while (!stack.empty()) {
    const std::string id = stack.back();
    stack.pop_back();
    for (const auto* c : incoming[id]) {
      if (needed.insert(c->src).second) stack.push_back(c->src);
    }
  }

  std::unordered_map<std::string, std::size_t> slot;
  for (const auto& id : topological_order(cppn)) {
    if (!needed.contains(id)) continue;
    Step step;
    step.function = nodes.at(id)->function;
    for (std::size_t k = 0; k < kInputIds.size(); ++k) {
      if (kInputIds[k] == id) step.input = static_cast<int>(k);
    }
    for (const auto* c : incoming[id]) step.incoming.push_back({slot.at(c->src), c->weight});
    slot.emplace(id, plan_.size());
    plan_.push_back(std::move(step));
  }
  output_slot_ = slot.at(std::string(kOutputId));
}

double CppnEvaluator::query(const QueryPoint& p) const {
  const double x1[1] = {p.x1};
  const double y1[1] = {p.y1};
  const double x2[1] = {p.x2};
  const double y2[1] = {p.y2};
  double out[1];
  query_batch(x1, y1, x2, y2, out);
  return out[0];
}

void CppnEvaluator::query_batch(std::span<const double> x1, std::span<const double> y1,
                                std::span<const double> x2, std::span<const double> y2,
                                std::span<double> out) const {
  const std::size_t lanes = out.size();
  if (x1.size() != lanes || y1.size() != lanes || x2.size() != lanes || y2.size() != lanes) {
    throw Error(ErrorCode::kInvalidArgument, "query batch spans differ in length");
  }
  if (lanes == 0) return;
  const auto& kernels = simd::active_kernels();
  const std::array<std::span<const double>, 4> coords = {x1, y1, x2, y2};
  std::vector<double> values(plan_.size() * lanes);
  for (std::size_t s = 0; s < plan_.size(); ++s) {
    const Step& step = plan_[s];
    std::span<double> acc(values.data() + s * lanes, lanes);
    if (step.input >= 0) {
      if (step.input == static_cast<int>(kBiasInput)) {
        std::fill(acc.begin(), acc.end(), 1.0);
      } else {
        std::copy(coords[step.input].begin(), coords[step.input].end(), acc.begin());
      }
      continue;
    }
    for (const Incoming& in : step.incoming) {
      kernels.axpy(acc, in.weight,
                   std::span<const double>(values.data() + in.src * lanes, lanes));
    }
    if (step.function != NodeFunction::kLinear) {
      for (double& v : acc) v = apply_function(step.function, v);
    }
  }
  std::copy_n(values.data() + output_slot_ * lanes, lanes, out.begin());
}

double query(const Cppn& cppn, const QueryPoint& point) { return CppnEvaluator(cppn).query(point); }

}  // namespace brainforge::cppn
