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

#include "brainforge/compiler/annotations.hpp"

#include <map>
#include <set>

#include "brainforge/error.hpp"

namespace brainforge::compiler {

using ann::ConnectionKey;
using ann::NetworkPhenotype;
using ann::Neuron;
using ann::Role;
using ann::Vec2;

std::string_view annotation_kind_name(AnnotationKind kind) {
  return kind == AnnotationKind::kMirrorX ? "MirrorX" : "Repeat";
}

std::optional<AnnotationKind> parse_annotation_kind(std::string_view name) {
  if (name == "MirrorX") return AnnotationKind::kMirrorX;
  if (name == "Repeat") return AnnotationKind::kRepeat;
  return std::nullopt;
}

Tuple4 connection_tuple(const NetworkPhenotype& network, const ConnectionKey& key) {
  const Neuron* s = network.find_neuron(key.src);
  const Neuron* d = network.find_neuron(key.dst);
  if (s == nullptr || d == nullptr) {
    throw Error(ErrorCode::kNotFound, "connection endpoint not found", key.src + "->" + key.dst);
  }
  return {s->position.x, s->position.y, d->position.x, d->position.y};
}

namespace {

constexpr double kSamePosition = 1e-9;

std::string key_text(const ConnectionKey& k) { return k.src + "->" + k.dst; }

class Expander {
 public:
  explicit Expander(const AnnotatedNetwork& annotated) : net_(annotated.phenotype) {}

  NetworkPhenotype& network() { return net_; }

  // Builds the orbit (member first, then images) for one annotation member.
  std::vector<ConnectionKey> expand_member(const Annotation& a, const ConnectionKey& member) {
    const ann::Connection* c = net_.find_connection(member.src, member.dst);
    if (c == nullptr) {
      throw Error(ErrorCode::kInvalidArgument, "annotation member is not a connection",
                  key_text(member));
    }
    const double weight = c->weight;
    const Neuron src = *net_.find_neuron(member.src);
    const Neuron dst = *net_.find_neuron(member.dst);
    std::vector<ConnectionKey> orbit{member};
    if (a.kind == AnnotationKind::kMirrorX) {
      if (src.position.x == 0.0 && dst.position.x == 0.0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "mirror member lies on the plane x = 0; its orbit is degenerate",
                    key_text(member));
      }
      const std::string s = ensure_neuron(src, {-src.position.x, src.position.y}, "~m");
      const std::string d = ensure_neuron(dst, {-dst.position.x, dst.position.y}, "~m");
      orbit.push_back(ensure_connection({s, d}, weight));
    } else {
      if (a.count < 2) {
        throw Error(ErrorCode::kInvalidArgument, "repeat count must be at least 2");
      }
      if (a.offset.x == 0.0 && a.offset.y == 0.0) {
        throw Error(ErrorCode::kInvalidArgument, "repeat offset must be nonzero");
      }
      for (int k = 1; k < a.count; ++k) {
        const std::string suffix = "~r" + std::to_string(k);
        const Vec2 sp{src.position.x + k * a.offset.x, src.position.y + k * a.offset.y};
        const Vec2 dp{dst.position.x + k * a.offset.x, dst.position.y + k * a.offset.y};
        const std::string s = ensure_neuron(src, sp, suffix);
        const std::string d = ensure_neuron(dst, dp, suffix);
        orbit.push_back(ensure_connection({s, d}, weight));
      }
    }
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      for (std::size_t j = i + 1; j < orbit.size(); ++j) {
        if (orbit[i] == orbit[j]) {
          throw Error(ErrorCode::kInvalidArgument, "annotation images coincide",
                      key_text(orbit[i]));
        }
      }
    }
    return orbit;
  }

 private:
  std::string ensure_neuron(const Neuron& origin, Vec2 p, std::string_view suffix) {
    if (!(p.x >= -1.0 && p.x <= 1.0 && p.y >= -1.0 && p.y <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "annotation expansion leaves [-1, 1]^2",
                  origin.id);
    }
    for (const auto& n : net_.neurons) {
      const double d = ann::distance(n.position, p);
      if (d <= kSamePosition) {
        if (n.role != origin.role) {
          throw Error(ErrorCode::kInvalidArgument,
                      "annotation image collides with a neuron of a different role", n.id);
        }
        return n.id;
      }
    }
    for (const auto& n : net_.neurons) {
      if (ann::distance(n.position, p) < ann::kMinNeuronSeparation) {
        throw Error(ErrorCode::kInvalidArgument,
                    "annotation image violates delta_min against an unrelated neuron", n.id);
      }
    }
    if (origin.role == Role::kBias) {
      throw Error(ErrorCode::kInvalidArgument,
                  "annotation image would create a second bias neuron", origin.id);
    }
    std::string id = origin.id + std::string(suffix);
    if (net_.find_neuron(id) != nullptr) {
      for (int n = 2;; ++n) {
        std::string candidate = id + "_" + std::to_string(n);
        if (net_.find_neuron(candidate) == nullptr) {
          id = std::move(candidate);
          break;
        }
      }
    }
    net_.neurons.push_back({id, origin.role, p});
    if (origin.role == Role::kInput) net_.input_order.push_back(id);
    if (origin.role == Role::kOutput) net_.output_order.push_back(id);
    return id;
  }

  ConnectionKey ensure_connection(ConnectionKey key, double weight) {
    for (auto& c : net_.connections) {
      if (c.src == key.src && c.dst == key.dst) {
        c.weight = weight;
        return key;
      }
    }
    net_.connections.push_back({key.src, key.dst, weight});
    return key;
  }

  NetworkPhenotype net_;
};

void check_annotation_shape(const AnnotatedNetwork& annotated) {
  std::set<ConnectionKey> seen;
  for (const auto& a : annotated.annotations) {
    if (a.members.empty()) throw Error(ErrorCode::kInvalidArgument, "annotation has no members");
    for (const auto& m : a.members) {
      if (annotated.phenotype.find_connection(m.src, m.dst) == nullptr) {
        throw Error(ErrorCode::kInvalidArgument, "annotation member is not a connection",
                    key_text(m));
      }
      if (!seen.insert(m).second) {
        throw Error(ErrorCode::kInvalidArgument, "connection annotated more than once",
                    key_text(m));
      }
    }
  }
}

}  // namespace

Expansion expand_annotations(const AnnotatedNetwork& annotated) {
  ann::require_valid(annotated.phenotype);
  check_annotation_shape(annotated);
  Expander expander(annotated);
  std::vector<std::vector<ConnectionKey>> groups;
  std::set<ConnectionKey> claimed;
  for (const auto& a : annotated.annotations) {
    for (const auto& m : a.members) {
      auto orbit = expander.expand_member(a, m);
      for (const auto& k : orbit) {
        if (!claimed.insert(k).second) {
          throw Error(ErrorCode::kInvalidArgument, "connection would belong to two orbits",
                      key_text(k));
        }
      }
      groups.push_back(std::move(orbit));
    }
  }
  NetworkPhenotype& net = expander.network();
  for (const auto& c : net.connections) {
    if (!claimed.contains(c.key())) groups.push_back({c.key()});
  }
  ann::require_valid(net);

  Expansion out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    Orbit orbit;
    orbit.id = "o" + std::to_string(i + 1);
    orbit.members = groups[i];
    for (const auto& k : orbit.members) orbit.tuples.push_back(connection_tuple(net, k));
    orbit.shared_weight = net.find_connection(orbit.members[0].src, orbit.members[0].dst)->weight;
    out.orbits.push_back(std::move(orbit));
  }
  out.phenotype = std::move(net);
  return out;
}

std::vector<ConnectionKey> annotation_coverage(const AnnotatedNetwork& annotated,
                                               std::size_t annotation_index) {
  const Annotation& a = annotated.annotations.at(annotation_index);
  AnnotatedNetwork single{annotated.phenotype, {a}};
  Expansion e = expand_annotations(single);
  std::vector<ConnectionKey> keys;
  const std::size_t orbit_count = a.members.size();
  for (std::size_t i = 0; i < orbit_count; ++i) {
    keys.insert(keys.end(), e.orbits[i].members.begin(), e.orbits[i].members.end());
  }
  return keys;
}

AnnotatedNetwork apply_annotated_edit(const AnnotatedNetwork& annotated,
                                      const ann::NetworkEdit& edit) {
  const Expansion expanded = expand_annotations(annotated);
  AnnotatedNetwork current{expanded.phenotype, annotated.annotations};
  if (const auto* remove = std::get_if<ann::edit::RemoveNeuron>(&edit)) {
    for (std::size_t i = 0; i < current.annotations.size(); ++i) {
      for (const auto& k : annotation_coverage(current, i)) {
        if (k.src == remove->id || k.dst == remove->id) {
          throw Error(ErrorCode::kConflict, "neuron is referenced by an annotation",
                      remove->id);
        }
      }
    }
  }
  AnnotatedNetwork out{ann::apply_edit(current.phenotype, edit), {}};
  for (const auto& a : current.annotations) {
    AnnotatedNetwork probe{out.phenotype, {a}};
    try {
      if (expand_annotations(probe).phenotype == out.phenotype) out.annotations.push_back(a);
    } catch (const Error&) {
      // dissolved: the regularity no longer holds
    }
  }
  return out;
}

}  // namespace brainforge::compiler
