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
#include <string>
#include <vector>

#include "brainforge/ann/network.hpp"
#include "brainforge/compiler/annotations.hpp"
#include "brainforge/cppn/cppn.hpp"
#include "brainforge/substrate/decoder.hpp"

namespace brainforge::compiler {

// Largest weight magnitude a compiled connection may carry.
inline constexpr double kCompilerMaxWeight = 3.0;
// Bound on the summed detector leakage at any queried pair.
inline constexpr double kCrossTalkBudget = 1e-8;
// Decode fidelity promised by a compiled genotype.
inline constexpr double kRoundTripTolerance = 1e-3;

// One compiled connection: four square nodes measuring (coord_j - t_j)^2 and
// an inv_exp detector that peaks at exactly 1 on the connection's tuple.
struct DetectorEntry {
  ann::ConnectionKey connection;
  std::array<std::string, 4> geometry;
  std::string detector;
  std::string orbit;
  friend bool operator==(const DetectorEntry&, const DetectorEntry&) = default;
};

// A linear sum node over member detectors; its single connection into the
// output (sum_node -> out0) carries the orbit's shared weight.
struct OrbitEntry {
  std::string id;
  std::string sum_node;
  std::vector<std::string> detectors;
  friend bool operator==(const OrbitEntry&, const OrbitEntry&) = default;
};

struct CompilationReport {
  double sharpness = 1.0;
  substrate::Substrate substrate;
  std::vector<DetectorEntry> detectors;
  std::vector<OrbitEntry> orbits;
  std::vector<std::string> warnings;

  const DetectorEntry* find_detector(const ann::ConnectionKey& key) const;
  const OrbitEntry* find_orbit(std::string_view id) const;

  friend bool operator==(const CompilationReport&, const CompilationReport&) = default;
};

struct Compilation {
  cppn::Cppn cppn;
  CompilationReport report;
};

// Smallest squared 4-space distance between a connection tuple and any other
// queryable (source, target) pair of the substrate; +inf with no connections.
double min_squared_separation(const substrate::Substrate& substrate,
                              const std::vector<ann::ConnectionKey>& connections);

// ln(W_max * N_c / budget) / min_squared_separation: with this sharpness the
// leakage of all detectors at any other queryable pair sums below the budget.
double required_sharpness(const substrate::Substrate& substrate,
                          const std::vector<ann::ConnectionKey>& connections);

// Expands the annotations and builds a genotype that decodes back to the
// expanded network over its own substrate. Connection weights must lie in
// +-[0.05, 3]. An empty network compiles to a constant-zero CPPN (warning).
Compilation compile(const AnnotatedNetwork& annotated);

// The network the genotype is tracking: the report's substrate plus one
// connection per detector, weighted by its orbit's output weight.
ann::NetworkPhenotype tracked_phenotype(const cppn::Cppn& cppn, const CompilationReport& report);

// Throws Error(kStaleReport) when the report does not describe the CPPN.
void check_report(const cppn::Cppn& cppn, const CompilationReport& report);

// Genotype surgery mirroring a phenotype edit; see README for the rules.
// Throws Error for stale reports and for edits invalid against the tracked
// network (same errors as ann::apply_edit).
Compilation recompile_edit(const cppn::Cppn& cppn, const CompilationReport& report,
                           const ann::NetworkEdit& edit);

// Decodes `cppn` over the phenotype's own layout and diffs it against the
// phenotype.
ann::NetworkDiff round_trip_diff(const cppn::Cppn& cppn, const ann::NetworkPhenotype& expected);

}  // namespace brainforge::compiler
