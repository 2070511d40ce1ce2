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

#include <string>
#include <string_view>

#include "brainforge/ann/network.hpp"
#include "brainforge/compiler/annotations.hpp"
#include "brainforge/compiler/compiler.hpp"
#include "brainforge/cppn/cppn.hpp"
#include "brainforge/evo/engine.hpp"
#include "brainforge/evo/novelty.hpp"
#include "brainforge/sim/evaluate.hpp"
#include "brainforge/sim/maze.hpp"
#include "json.hpp"

// JSON schemas for every file and wire payload. Readers are strict: missing
// or unknown fields and wrong types raise Error(kSchema) naming the path.
namespace brainforge::io {

// Insertion-ordered so serializations are byte-stable.
using Json = nlohmann::ordered_json;

// Throws Error(kParse) with the byte offset.
Json parse_json(std::string_view text);
std::string dump(const Json& json);  // compact, no trailing newline

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

// net/1
Json network_to_json(const ann::NetworkPhenotype& network);
ann::NetworkPhenotype network_from_json(const Json& json);

// anet/1: net/1 fields plus "annotations":[{"kind","params","members"}].
// MirrorX params are {}; Repeat params are {"dx","dy","count"}.
Json annotated_to_json(const compiler::AnnotatedNetwork& annotated);
compiler::AnnotatedNetwork annotated_from_json(const Json& json);

// cppn/1
Json cppn_to_json(const cppn::Cppn& cppn);
cppn::Cppn cppn_from_json(const Json& json);

// cppnrpt/1
Json report_to_json(const compiler::CompilationReport& report);
compiler::CompilationReport report_from_json(const Json& json);

Json substrate_to_json(const substrate::Substrate& substrate);
substrate::Substrate substrate_from_json(const Json& json);

// {"op":"AddNeuron","role","x","y"[,"id"]}, {"op":"RemoveNeuron","id"},
// {"op":"MoveNeuron","id","x","y"}, {"op":"AddConnection","src","dst","weight"},
// {"op":"RemoveConnection","src","dst"}, {"op":"SetWeight","src","dst","weight"}
Json edit_to_json(const ann::NetworkEdit& edit);
ann::NetworkEdit edit_from_json(const Json& json);

// {"fitness","behavior":{"x","y"},"trajectory":[[x,y,heading],...],
//  "goal_reached","steps_used"}
Json evaluation_to_json(const sim::EvaluationResult& result);
sim::EvaluationResult evaluation_from_json(const Json& json);

Json archive_to_json(const evo::NoveltyArchive& archive);
evo::NoveltyArchive archive_from_json(const Json& json);

Json individual_to_json(const evo::Individual& individual);
evo::Individual individual_from_json(const Json& json);

// pop/1
Json population_to_json(const evo::Population& population);
evo::Population population_from_json(const Json& json);

// {"start":{"x","y","heading"},"goal":{"x","y","radius"},"walls":[[x1,y1,x2,y2],...]}
// with interior walls only.
Json maze_to_json(const sim::Maze& maze);

// brain/1: a portable brain file, {"schema","anet","cppn","report"}.
struct BrainBundle {
  compiler::AnnotatedNetwork anet;
  cppn::Cppn cppn;
  compiler::CompilationReport report;
};
Json bundle_to_json(const BrainBundle& bundle);
BrainBundle bundle_from_json(const Json& json);

}  // namespace brainforge::io
