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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "brainforge/ann/network.hpp"

namespace brainforge::compiler {

enum class AnnotationKind {
  kMirrorX,  // reflect about the plane x = 0
  kRepeat,   // count - 1 translated copies, offset apart
};

std::string_view annotation_kind_name(AnnotationKind kind);
std::optional<AnnotationKind> parse_annotation_kind(std::string_view name);

struct Annotation {
  AnnotationKind kind = AnnotationKind::kMirrorX;
  ann::Vec2 offset;  // Repeat only
  int count = 0;     // Repeat only, >= 2
  std::vector<ann::ConnectionKey> members;
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct AnnotatedNetwork {
  ann::NetworkPhenotype phenotype;
  std::vector<Annotation> annotations;
  friend bool operator==(const AnnotatedNetwork&, const AnnotatedNetwork&) = default;
};

using Tuple4 = std::array<double, 4>;  // (x_src, y_src, x_dst, y_dst)

// Connections tied together by a regularity; they share one weight.
struct Orbit {
  std::string id;
  std::vector<ann::ConnectionKey> members;
  std::vector<Tuple4> tuples;  // parallel to members
  double shared_weight = 0.0;
};

struct Expansion {
  ann::NetworkPhenotype phenotype;
  std::vector<Orbit> orbits;  // annotation orbits first, then singletons
};

// Materializes every annotation's images in the phenotype. Missing image
// neurons are created with the source neuron's role (new inputs and outputs
// join the interface orders); image connections take the member's weight.
// Expanding an already expanded network is the identity.
//
// Throws Error(kInvalidArgument) when an image leaves [-1, 1]^2, lands within
// delta_min of an unrelated neuron, coincides with a neuron of another role,
// or when two orbits would claim the same connection.
Expansion expand_annotations(const AnnotatedNetwork& annotated);

// Connection keys (members and their images) covered by one annotation, as
// expand_annotations would produce them on `annotated`.
std::vector<ann::ConnectionKey> annotation_coverage(const AnnotatedNetwork& annotated,
                                                    std::size_t annotation_index);

// Applies an edit to an expanded annotated network. Removing a neuron that an
// annotation's coverage touches is rejected; any other annotation that no
// longer describes the edited network (expanding it would change something)
// is dissolved, leaving its connections as plain ones.
AnnotatedNetwork apply_annotated_edit(const AnnotatedNetwork& annotated,
                                      const ann::NetworkEdit& edit);

Tuple4 connection_tuple(const ann::NetworkPhenotype& network, const ann::ConnectionKey& key);

}  // namespace brainforge::compiler
