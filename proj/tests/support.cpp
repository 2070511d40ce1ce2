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

#include "support.hpp"

#include <algorithm>
#include <cmath>

#include "brainforge/error.hpp"
#include "brainforge/evo/engine.hpp"

namespace brainforge::testing {

using ann::Role;

double uniform(RandomStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

namespace {

double random_weight(RandomStream& rng) {
  const double m = uniform(rng, ann::kMinWeightMagnitude, ann::kMaxWeight);
  return rng.bernoulli(0.5) ? m : -m;
}

bool is_free(const ann::NetworkPhenotype& net, ann::Vec2 p, std::string_view ignore = {}) {
  if (std::fabs(p.x) > 1.0 || std::fabs(p.y) > 1.0) return false;
  for (const auto& n : net.neurons) {
    if (n.id != ignore && ann::distance(n.position, p) < ann::kMinNeuronSeparation) return false;
  }
  return true;
}

ann::Vec2 random_free_position(const ann::NetworkPhenotype& net, RandomStream& rng,
                               std::string_view ignore = {}) {
  for (;;) {
    const ann::Vec2 p{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
    if (is_free(net, p, ignore)) return p;
  }
}

ann::NetworkPhenotype random_base(RandomStream& rng, std::size_t max_neurons,
                                  std::size_t max_connections) {
  // Grid columns are symmetric about x = 0 so mirror images often land on
  // existing cells.
  constexpr int kCells = 6;
  constexpr double kPitch = 0.3;
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < kCells; ++i) {
    for (int j = 0; j < kCells; ++j) cells.emplace_back(i, j);
  }
  for (std::size_t i = cells.size(); i > 1; --i) std::swap(cells[i - 1], cells[rng.index(i)]);

  const std::size_t inputs = 1 + rng.index(3);
  const std::size_t outputs = 1 + rng.index(2);
  const std::size_t hidden = rng.index(max_neurons - inputs - outputs);
  ann::NetworkPhenotype net;
  std::size_t cell = 0;
  const auto place = [&](std::string id, Role role) {
    const auto [i, j] = cells[cell++];
    const bool jitter = rng.bernoulli(0.5);
    const double jx = jitter ? uniform(rng, -0.05, 0.05) : 0.0;
    const double jy = jitter ? uniform(rng, -0.05, 0.05) : 0.0;
    net.neurons.push_back(
        {id, role, {-0.75 + kPitch * i + jx, -0.75 + kPitch * j + jy}});
  };
  for (std::size_t i = 0; i < inputs; ++i) {
    place("i" + std::to_string(i + 1), Role::kInput);
    net.input_order.push_back(net.neurons.back().id);
  }
  place("bias", Role::kBias);
  for (std::size_t i = 0; i < hidden; ++i) place("h" + std::to_string(i + 1), Role::kHidden);
  for (std::size_t i = 0; i < outputs; ++i) {
    place("o" + std::to_string(i + 1), Role::kOutput);
    net.output_order.push_back(net.neurons.back().id);
  }
  const std::size_t want = 1 + rng.index(max_connections);
  for (std::size_t attempt = 0; attempt < 4 * want && net.connections.size() < want; ++attempt) {
    const auto& src = net.neurons[rng.index(net.neurons.size())];
    const auto& dst = net.neurons[rng.index(net.neurons.size())];
    if (!ann::is_target_role(dst.role) || net.find_connection(src.id, dst.id)) continue;
    net.connections.push_back({src.id, dst.id, random_weight(rng)});
  }
  return net;
}

bool within_limits(const compiler::AnnotatedNetwork& a) {
  try {
    const auto e = compiler::expand_annotations(a);
    return e.phenotype.neurons.size() <= 20 && e.phenotype.connections.size() <= 40 &&
           !e.phenotype.connections.empty();
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

compiler::AnnotatedNetwork random_annotated_network(RandomStream& rng,
                                                    double annotation_probability) {
  for (;;) {
    compiler::AnnotatedNetwork a{random_base(rng, 14, 24), {}};
    if (!within_limits(a)) continue;
    std::vector<ann::ConnectionKey> unused;
    for (const auto& c : a.phenotype.connections) unused.push_back(c.key());
    for (int k = 0; k < 2 && rng.bernoulli(annotation_probability) && !unused.empty(); ++k) {
      compiler::Annotation ann;
      if (rng.bernoulli(0.5)) {
        ann.kind = compiler::AnnotationKind::kMirrorX;
      } else {
        ann.kind = compiler::AnnotationKind::kRepeat;
        ann.count = 2 + static_cast<int>(rng.index(2));
        const double step = rng.bernoulli(0.5) ? 0.3 : -0.3;
        ann.offset = rng.bernoulli(0.5) ? ann::Vec2{step, 0.0} : ann::Vec2{0.0, step};
      }
      const std::size_t members = 1 + rng.index(std::min<std::size_t>(2, unused.size()));
      for (std::size_t m = 0; m < members; ++m) {
        const std::size_t pick = rng.index(unused.size());
        ann.members.push_back(unused[pick]);
        unused.erase(unused.begin() + static_cast<std::ptrdiff_t>(pick));
      }
      compiler::AnnotatedNetwork trial = a;
      trial.annotations.push_back(ann);
      if (within_limits(trial)) {
        a = std::move(trial);
      } else {
        // Members go back to the pool for the next attempt.
        for (const auto& m : ann.members) unused.push_back(m);
      }
    }
    return a;
  }
}

compiler::AnnotatedNetwork random_orbit_network(RandomStream& rng) {
  for (;;) {
    auto a = random_annotated_network(rng, 1.0);
    const auto e = compiler::expand_annotations(a);
    for (const auto& o : e.orbits) {
      if (o.members.size() >= 2) return a;
    }
  }
}

ann::NetworkEdit random_valid_edit(const ann::NetworkPhenotype& net, RandomStream& rng) {
  for (;;) {
    ann::NetworkEdit edit;
    const auto& any = net.neurons[rng.index(net.neurons.size())];
    switch (rng.index(6)) {
      case 0:
        edit = ann::edit::AddNeuron{Role::kHidden, random_free_position(net, rng), std::nullopt};
        break;
      case 1: {
        std::vector<std::string> hidden;
        for (const auto& n : net.neurons) {
          if (n.role == Role::kHidden) hidden.push_back(n.id);
        }
        if (hidden.empty()) continue;
        edit = ann::edit::RemoveNeuron{hidden[rng.index(hidden.size())]};
        break;
      }
      case 2:
        edit = ann::edit::MoveNeuron{any.id, random_free_position(net, rng, any.id)};
        break;
      case 3: {
        const auto& dst = net.neurons[rng.index(net.neurons.size())];
        edit = ann::edit::AddConnection{any.id, dst.id, random_weight(rng)};
        break;
      }
      case 4:
      case 5: {
        if (net.connections.empty()) continue;
        const auto& c = net.connections[rng.index(net.connections.size())];
        if (rng.bernoulli(0.5)) {
          edit = ann::edit::RemoveConnection{c.src, c.dst};
        } else {
          edit = ann::edit::SetWeight{c.src, c.dst, random_weight(rng)};
        }
        break;
      }
    }
    try {
      ann::apply_edit(net, edit);
      return edit;
    } catch (const Error&) {
    }
  }
}

compiler::AnnotatedNetwork random_maze_brain(RandomStream& rng) {
  const auto s = evo::maze_substrate();
  compiler::AnnotatedNetwork a;
  a.phenotype.neurons = s.neurons;
  a.phenotype.input_order = s.input_order;
  a.phenotype.output_order = s.output_order;
  const std::size_t want = 3 + rng.index(10);
  for (std::size_t attempt = 0; attempt < 8 * want && a.phenotype.connections.size() < want;
       ++attempt) {
    const auto& src = s.neurons[rng.index(s.neurons.size())];
    const auto& dst = s.neurons[rng.index(s.neurons.size())];
    if (!ann::is_target_role(dst.role) || a.phenotype.find_connection(src.id, dst.id)) continue;
    a.phenotype.connections.push_back({src.id, dst.id, random_weight(rng)});
  }
  if (rng.bernoulli(0.5)) {
    const auto& c = a.phenotype.connections[rng.index(a.phenotype.connections.size())];
    compiler::AnnotatedNetwork trial = a;
    trial.annotations.push_back({compiler::AnnotationKind::kMirrorX, {}, 0, {c.key()}});
    try {
      compiler::expand_annotations(trial);
      a = std::move(trial);
    } catch (const Error&) {
    }
  }
  return a;
}

sim::Maze random_maze(RandomStream& rng) {
  for (;;) {
    std::vector<sim::Segment> walls;
    const std::size_t n = rng.index(7);
    for (std::size_t i = 0; i < n; ++i) {
      walls.push_back({{rng.uniform(), rng.uniform()}, {rng.uniform(), rng.uniform()}});
    }
    const sim::Pose start{uniform(rng, 0.05, 0.95), uniform(rng, 0.05, 0.95),
                          uniform(rng, -3.14, 3.14)};
    const sim::Goal goal{uniform(rng, 0.1, 0.9), uniform(rng, 0.1, 0.9), uniform(rng, 0.02, 0.1)};
    try {
      return sim::Maze(walls, start, goal);
    } catch (const Error&) {
    }
  }
}

ann::NetworkPhenotype tiny_network(double weight) {
  ann::NetworkPhenotype net;
  net.neurons = {{"in", Role::kInput, {-0.5, -1.0}},
                 {"bias", Role::kBias, {0.5, -1.0}},
                 {"out", Role::kOutput, {0.0, 1.0}}};
  net.input_order = {"in"};
  net.output_order = {"out"};
  if (weight != 0.0) net.connections.push_back({"in", "out", weight});
  return net;
}

}  // namespace brainforge::testing
