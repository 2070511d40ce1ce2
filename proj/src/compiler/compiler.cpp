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

#include "brainforge/compiler/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "brainforge/error.hpp"

namespace brainforge::compiler {

using ann::ConnectionKey;
using cppn::ConnectionTag;
using cppn::Cppn;
using cppn::NodeFunction;
using cppn::NodeTag;

const DetectorEntry* CompilationReport::find_detector(const ConnectionKey& key) const {
  for (const auto& d : detectors) {
    if (d.connection == key) return &d;
  }
  return nullptr;
}

const OrbitEntry* CompilationReport::find_orbit(std::string_view id) const {
  for (const auto& o : orbits) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

namespace {

std::string key_text(const ConnectionKey& k) { return k.src + "->" + k.dst; }

std::unordered_map<std::string, std::size_t> neuron_index(const substrate::Substrate& s) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < s.neurons.size(); ++i) index.emplace(s.neurons[i].id, i);
  return index;
}

Tuple4 substrate_tuple(const substrate::Substrate& s, const ConnectionKey& key) {
  const ann::Neuron* src = nullptr;
  const ann::Neuron* dst = nullptr;
  for (const auto& n : s.neurons) {
    if (n.id == key.src) src = &n;
    if (n.id == key.dst) dst = &n;
  }
  if (src == nullptr || dst == nullptr) {
    throw Error(ErrorCode::kNotFound, "connection endpoint missing from substrate",
                key_text(key));
  }
  return {src->position.x, src->position.y, dst->position.x, dst->position.y};
}

long long numeric_suffix(std::string_view id, std::string_view prefix) {
  if (id.substr(0, prefix.size()) != prefix) return 0;
  long long v = 0;
  for (char ch : id.substr(prefix.size())) {
    if (ch < '0' || ch > '9') return 0;
    v = v * 10 + (ch - '0');
  }
  return v;
}

// Appends and removes compiler-owned structure on a (cppn, report) pair.
class GenotypeBuilder {
 public:
  explicit GenotypeBuilder(Compilation& c) : c_(c) {
    for (const auto& n : c_.cppn.nodes) next_node_ = std::max(next_node_, numeric_suffix(n.id, "n"));
    for (const auto& o : c_.report.orbits) next_orbit_ = std::max(next_orbit_, numeric_suffix(o.id, "o"));
    ++next_node_;
    ++next_orbit_;
  }

  OrbitEntry& add_orbit(double weight) {
    const std::string sum = node(NodeFunction::kLinear, NodeTag::kOrbitSum);
    link(sum, std::string(cppn::kOutputId), weight, ConnectionTag::kOrbitWeight);
    c_.report.orbits.push_back({"o" + std::to_string(next_orbit_++), sum, {}});
    return c_.report.orbits.back();
  }

  void add_detector(const ConnectionKey& key, const Tuple4& t, const std::string& orbit_id) {
    DetectorEntry d;
    d.connection = key;
    d.orbit = orbit_id;
    for (int j = 0; j < 4; ++j) d.geometry[j] = node(NodeFunction::kSquare, NodeTag::kGeometry);
    d.detector = node(NodeFunction::kInvExp, NodeTag::kSharpnessTarget);
    for (int j = 0; j < 4; ++j) {
      link(std::string(cppn::kInputIds[j]), d.geometry[j], 1.0, ConnectionTag::kGeometry);
      link(std::string(cppn::kInputIds[cppn::kBiasInput]), d.geometry[j], -t[j],
           ConnectionTag::kGeometry);
    }
    for (int j = 0; j < 4; ++j) {
      link(d.geometry[j], d.detector, c_.report.sharpness, ConnectionTag::kSharpness);
    }
    OrbitEntry& orbit = orbit_by_id(orbit_id);
    link(d.detector, orbit.sum_node, 1.0, ConnectionTag::kOrbitLink);
    orbit.detectors.push_back(d.detector);
    c_.report.detectors.push_back(std::move(d));
  }

  void remove_detector(const ConnectionKey& key) {
    auto it = std::find_if(c_.report.detectors.begin(), c_.report.detectors.end(),
                           [&](const DetectorEntry& d) { return d.connection == key; });
    if (it == c_.report.detectors.end()) {
      throw Error(ErrorCode::kNotFound, "no detector for connection", key_text(key));
    }
    const DetectorEntry d = *it;
    c_.report.detectors.erase(it);
    std::set<std::string> doomed(d.geometry.begin(), d.geometry.end());
    doomed.insert(d.detector);
    OrbitEntry& orbit = orbit_by_id(d.orbit);
    std::erase(orbit.detectors, d.detector);
    if (orbit.detectors.empty()) {
      doomed.insert(orbit.sum_node);
      const std::string id = orbit.id;
      std::erase_if(c_.report.orbits, [&](const OrbitEntry& o) { return o.id == id; });
    }
    erase_nodes(doomed);
  }

  // Moves a detector out of its orbit into a new singleton orbit.
  void split_detector(const ConnectionKey& key, double weight) {
    DetectorEntry& d = detector(key);
    OrbitEntry& old_orbit = orbit_by_id(d.orbit);
    std::erase_if(c_.cppn.connections, [&](const cppn::CppnConnection& c) {
      return c.src == d.detector && c.dst == old_orbit.sum_node;
    });
    std::erase(old_orbit.detectors, d.detector);
    const std::string detector_id = d.detector;
    OrbitEntry& fresh = add_orbit(weight);
    fresh.detectors.push_back(detector_id);
    link(detector_id, fresh.sum_node, 1.0, ConnectionTag::kOrbitLink);
    this->detector(key).orbit = fresh.id;
  }

  void set_orbit_weight(const std::string& orbit_id, double weight) {
    const OrbitEntry& orbit = orbit_by_id(orbit_id);
    c_.cppn.find_connection(orbit.sum_node, cppn::kOutputId)->weight = weight;
  }

  void rewrite_geometry(const DetectorEntry& d, const Tuple4& t) {
    for (int j = 0; j < 4; ++j) {
      c_.cppn.find_connection(cppn::kInputIds[cppn::kBiasInput], d.geometry[j])->weight = -t[j];
    }
  }

  void set_sharpness(double s) {
    c_.report.sharpness = s;
    for (const auto& d : c_.report.detectors) {
      for (const auto& g : d.geometry) c_.cppn.find_connection(g, d.detector)->weight = s;
    }
  }

  DetectorEntry& detector(const ConnectionKey& key) {
    for (auto& d : c_.report.detectors) {
      if (d.connection == key) return d;
    }
    throw Error(ErrorCode::kNotFound, "no detector for connection", key_text(key));
  }

  OrbitEntry& orbit_by_id(const std::string& id) {
    for (auto& o : c_.report.orbits) {
      if (o.id == id) return o;
    }
    throw Error(ErrorCode::kStaleReport, "unknown orbit", id);
  }

 private:
  std::string node(NodeFunction f, NodeTag tag) {
    std::string id = "n" + std::to_string(next_node_++);
    c_.cppn.nodes.push_back({id, f, tag});
    return id;
  }

  void link(std::string src, std::string dst, double w, ConnectionTag tag) {
    c_.cppn.connections.push_back({std::move(src), std::move(dst), w, tag});
  }

  void erase_nodes(const std::set<std::string>& doomed) {
    std::erase_if(c_.cppn.nodes, [&](const cppn::CppnNode& n) { return doomed.contains(n.id); });
    std::erase_if(c_.cppn.connections, [&](const cppn::CppnConnection& c) {
      return doomed.contains(c.src) || doomed.contains(c.dst);
    });
  }

  Compilation& c_;
  long long next_node_ = 0;
  long long next_orbit_ = 0;
};

std::vector<ConnectionKey> detector_keys(const CompilationReport& report) {
  std::vector<ConnectionKey> keys;
  for (const auto& d : report.detectors) keys.push_back(d.connection);
  return keys;
}

}  // namespace

double min_squared_separation(const substrate::Substrate& substrate,
                              const std::vector<ConnectionKey>& connections) {
  const auto index = neuron_index(substrate);
  const auto pairs = substrate::queryable_pairs(substrate);
  const auto& neurons = substrate.neurons;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& key : connections) {
    auto s = index.find(key.src);
    auto d = index.find(key.dst);
    if (s == index.end() || d == index.end()) {
      throw Error(ErrorCode::kNotFound, "connection endpoint missing from substrate",
                  key_text(key));
    }
    const ann::Vec2 ts = neurons[s->second].position;
    const ann::Vec2 td = neurons[d->second].position;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs.src[i] == s->second && pairs.dst[i] == d->second) continue;
      const ann::Vec2 qs = neurons[pairs.src[i]].position;
      const ann::Vec2 qd = neurons[pairs.dst[i]].position;
      const double a = qs.x - ts.x, b = qs.y - ts.y, c = qd.x - td.x, e = qd.y - td.y;
      best = std::min(best, a * a + b * b + c * c + e * e);
    }
  }
  return best;
}

double required_sharpness(const substrate::Substrate& substrate,
                          const std::vector<ConnectionKey>& connections) {
  if (connections.empty()) return 1.0;
  double d2 = min_squared_separation(substrate, connections);
  if (!(d2 > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "two connections share a coordinate tuple; detectors cannot separate them");
  }
  if (!std::isfinite(d2)) d2 = 1.0;
  const double n = static_cast<double>(connections.size());
  return std::log(kCompilerMaxWeight * n / kCrossTalkBudget) / d2;
}

Compilation compile(const AnnotatedNetwork& annotated) {
  const Expansion expansion = expand_annotations(annotated);
  const ann::NetworkPhenotype& net = expansion.phenotype;
  for (const auto& c : net.connections) {
    const double m = std::fabs(c.weight);
    if (!(m >= ann::kMinWeightMagnitude && m <= kCompilerMaxWeight)) {
      throw Error(ErrorCode::kInvalidArgument, "connection weight outside +-[0.05, 3]",
                  key_text(c.key()));
    }
  }
  Compilation out{Cppn::empty(), {}};
  out.report.substrate = substrate::substrate_from_phenotype(net);
  if (net.connections.empty()) {
    out.report.warnings.push_back("network has no connections; compiled to a constant-zero CPPN");
    return out;
  }
  std::vector<ConnectionKey> keys;
  for (const auto& c : net.connections) keys.push_back(c.key());
  out.report.sharpness = required_sharpness(out.report.substrate, keys);

  GenotypeBuilder builder(out);
  for (const auto& orbit : expansion.orbits) {
    const std::string orbit_id = builder.add_orbit(orbit.shared_weight).id;
    for (std::size_t m = 0; m < orbit.members.size(); ++m) {
      builder.add_detector(orbit.members[m], orbit.tuples[m], orbit_id);
    }
  }
  return out;
}

void check_report(const Cppn& cppn, const CompilationReport& report) {
  auto stale = [](const std::string& what) {
    throw Error(ErrorCode::kStaleReport, "report does not match the cppn", what);
  };
  substrate::check_substrate(report.substrate);
  std::unordered_map<std::string, const cppn::CppnNode*> nodes;
  for (const auto& n : cppn.nodes) nodes.emplace(n.id, &n);
  std::map<std::pair<std::string, std::string>, const cppn::CppnConnection*> links;
  for (const auto& c : cppn.connections) links.emplace(std::make_pair(c.src, c.dst), &c);
  auto node_is = [&](const std::string& id, NodeFunction f, NodeTag tag) {
    auto it = nodes.find(id);
    return it != nodes.end() && it->second->function == f && it->second->tag == tag;
  };
  auto link_of = [&](const std::string& src, const std::string& dst,
                     ConnectionTag tag) -> const cppn::CppnConnection* {
    auto it = links.find({src, dst});
    if (it == links.end() || it->second->tag != tag) return nullptr;
    return it->second;
  };

  std::unordered_map<std::string, const OrbitEntry*> orbits;
  for (const auto& o : report.orbits) {
    if (!orbits.emplace(o.id, &o).second) stale("duplicate orbit " + o.id);
    if (!node_is(o.sum_node, NodeFunction::kLinear, NodeTag::kOrbitSum)) stale("orbit sum " + o.id);
    if (link_of(o.sum_node, std::string(cppn::kOutputId), ConnectionTag::kOrbitWeight) == nullptr) {
      stale("orbit weight " + o.id);
    }
    if (o.detectors.empty()) stale("empty orbit " + o.id);
  }
  std::set<ConnectionKey> keys;
  std::unordered_set<std::string> seen_detectors;
  const auto bias = std::string(cppn::kInputIds[cppn::kBiasInput]);
  for (const auto& d : report.detectors) {
    if (!keys.insert(d.connection).second) stale("duplicate detector " + key_text(d.connection));
    const Tuple4 t = substrate_tuple(report.substrate, d.connection);
    if (!node_is(d.detector, NodeFunction::kInvExp, NodeTag::kSharpnessTarget)) {
      stale("detector node " + d.detector);
    }
    for (int j = 0; j < 4; ++j) {
      const std::string& g = d.geometry[j];
      if (!node_is(g, NodeFunction::kSquare, NodeTag::kGeometry)) stale("geometry node " + g);
      const auto* in = link_of(std::string(cppn::kInputIds[j]), g, ConnectionTag::kGeometry);
      const auto* off = link_of(bias, g, ConnectionTag::kGeometry);
      const auto* sharp = link_of(g, d.detector, ConnectionTag::kSharpness);
      if (in == nullptr || in->weight != 1.0) stale("coordinate link " + g);
      if (off == nullptr || off->weight != -t[j]) stale("position offset " + g);
      if (sharp == nullptr || sharp->weight != report.sharpness) stale("sharpness " + g);
    }
    auto orbit = orbits.find(d.orbit);
    if (orbit == orbits.end()) stale("detector orbit " + d.orbit);
    if (link_of(d.detector, orbit->second->sum_node, ConnectionTag::kOrbitLink) == nullptr) {
      stale("orbit link " + d.detector);
    }
    const auto& members = orbit->second->detectors;
    if (std::find(members.begin(), members.end(), d.detector) == members.end()) {
      stale("orbit membership " + d.detector);
    }
    seen_detectors.insert(d.detector);
  }
  for (const auto& o : report.orbits) {
    for (const auto& det : o.detectors) {
      if (!seen_detectors.contains(det)) stale("orbit lists unknown detector " + det);
    }
  }
}

ann::NetworkPhenotype tracked_phenotype(const Cppn& cppn, const CompilationReport& report) {
  ann::NetworkPhenotype net{report.substrate.neurons, {}, report.substrate.input_order,
                            report.substrate.output_order};
  for (const auto& d : report.detectors) {
    const OrbitEntry* orbit = report.find_orbit(d.orbit);
    const cppn::CppnConnection* w =
        orbit == nullptr ? nullptr : cppn.find_connection(orbit->sum_node, cppn::kOutputId);
    if (w == nullptr) {
      throw Error(ErrorCode::kStaleReport, "orbit weight missing", d.orbit);
    }
    net.connections.push_back({d.connection.src, d.connection.dst, w->weight});
  }
  return net;
}

namespace {

struct Surgery {
  GenotypeBuilder& builder;
  Compilation& c;
  const ann::NetworkPhenotype& edited;

  void operator()(const ann::edit::AddNeuron&) {
    c.report.substrate = substrate::substrate_from_phenotype(edited);
  }

  void operator()(const ann::edit::RemoveNeuron& e) {
    std::vector<ConnectionKey> touching;
    for (const auto& d : c.report.detectors) {
      if (d.connection.src == e.id || d.connection.dst == e.id) touching.push_back(d.connection);
    }
    for (const auto& k : touching) builder.remove_detector(k);
    c.report.substrate = substrate::substrate_from_phenotype(edited);
  }

  void operator()(const ann::edit::MoveNeuron& e) {
    c.report.substrate = substrate::substrate_from_phenotype(edited);
    for (const auto& d : c.report.detectors) {
      if (d.connection.src == e.id || d.connection.dst == e.id) {
        builder.rewrite_geometry(d, substrate_tuple(c.report.substrate, d.connection));
      }
    }
  }

  void operator()(const ann::edit::AddConnection& e) {
    const std::string orbit = builder.add_orbit(e.weight).id;
    const ConnectionKey key{e.src, e.dst};
    builder.add_detector(key, substrate_tuple(c.report.substrate, key), orbit);
  }

  void operator()(const ann::edit::RemoveConnection& e) { builder.remove_detector({e.src, e.dst}); }

  void operator()(const ann::edit::SetWeight& e) {
    const DetectorEntry& d = builder.detector({e.src, e.dst});
    const OrbitEntry& orbit = builder.orbit_by_id(d.orbit);
    if (orbit.detectors.size() == 1) {
      builder.set_orbit_weight(orbit.id, e.weight);
    } else {
      builder.split_detector({e.src, e.dst}, e.weight);
    }
  }
};

}  // namespace

Compilation recompile_edit(const Cppn& cppn, const CompilationReport& report,
                           const ann::NetworkEdit& edit) {
  check_report(cppn, report);
  const ann::NetworkPhenotype current = tracked_phenotype(cppn, report);
  const ann::NetworkPhenotype edited = ann::apply_edit(current, edit);

  Compilation out{cppn, report};
  GenotypeBuilder builder(out);
  std::visit(Surgery{builder, out, edited}, edit);

  const double needed = required_sharpness(out.report.substrate, detector_keys(out.report));
  if (needed > out.report.sharpness) builder.set_sharpness(needed);
  const std::string empty_note = "network has no connections; genotype is constant zero";
  if (out.report.detectors.empty() &&
      std::find(out.report.warnings.begin(), out.report.warnings.end(), empty_note) ==
          out.report.warnings.end()) {
    out.report.warnings.push_back(empty_note);
  }
  return out;
}

ann::NetworkDiff round_trip_diff(const Cppn& cppn, const ann::NetworkPhenotype& expected) {
  const auto decoded = substrate::decode(cppn, substrate::substrate_from_phenotype(expected));
  return ann::diff_networks(expected, decoded);
}

}  // namespace brainforge::compiler
