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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "brainforge/compiler/compiler.hpp"
#include "brainforge/cppn/cppn.hpp"
#include "brainforge/cppn/mutation.hpp"
#include "brainforge/evo/novelty.hpp"
#include "brainforge/random.hpp"
#include "brainforge/sim/evaluate.hpp"
#include "brainforge/substrate/decoder.hpp"

namespace brainforge::evo {

using IndividualId = std::uint64_t;

struct Individual {
  IndividualId id = 0;
  std::optional<IndividualId> parent;
  cppn::Cppn genome;
  // Present only while the genome is exactly what the compiler produced;
  // mutated offspring drop it.
  std::optional<compiler::CompilationReport> report;
  substrate::Substrate substrate;
  std::optional<sim::EvaluationResult> eval;
};

enum class SelectionKind { kInteractive, kObjective, kNovelty, kMixed };

std::string_view selection_kind_name(SelectionKind kind);
std::optional<SelectionKind> parse_selection_kind(std::string_view name);

struct SelectionMode {
  SelectionKind kind = SelectionKind::kObjective;
  std::vector<IndividualId> selected;  // Interactive and Mixed only

  static SelectionMode objective() { return {SelectionKind::kObjective, {}}; }
  static SelectionMode novelty() { return {SelectionKind::kNovelty, {}}; }
  static SelectionMode interactive(std::vector<IndividualId> ids) {
    return {SelectionKind::kInteractive, std::move(ids)};
  }
  static SelectionMode mixed(std::vector<IndividualId> ids) {
    return {SelectionKind::kMixed, std::move(ids)};
  }
};

struct EvolutionConfig {
  int pop_size = 64;
  int elitism = 2;
  double truncation = 0.25;
  int k_nearest = 15;
  std::uint64_t seed = 0;
  cppn::MutationConfig mutation;

  // Small candidate grid for human-in-the-loop sessions.
  static EvolutionConfig interactive();
  void check() const;
};

struct Population {
  int generation = 0;
  std::vector<Individual> members;
  IndividualId next_id = 1;
};

struct GenerationOutcome {
  Population population;        // offspring are not yet evaluated
  NoveltyArchive archive;
  std::vector<IndividualId> parents;  // the selected parent pool, in rank order
};

// Selects a parent pool, carries the top `elitism` parents over unchanged and
// fills the rest with mutants of the pool assigned round-robin. Offspring j
// mutates with rng.substream(j).
//
// Throws Error(kInvalidArgument) for an empty or unknown Interactive/Mixed
// selection and for unevaluated members in the modes that score them.
GenerationOutcome next_generation(const Population& population, const SelectionMode& mode,
                                  const NoveltyArchive& archive, const EvolutionConfig& config,
                                  const RandomStream& rng);

// Decodes the genome over the individual's substrate.
ann::NetworkPhenotype express(const Individual& individual);

void evaluate_individual(Individual& individual, const sim::Maze& maze,
                         const sim::SimConfig& sim_config);

// Evaluates every member lacking an evaluation, in member order.
void evaluate_population(Population& population, const sim::Maze& maze,
                         const sim::SimConfig& sim_config);

// Over-generates 4n mutants of `parent` (mutant i uses rng.substream(i) and
// receives id first_id + i), evaluates them, and returns the best n ranked by
// goal reached, then novelty within the batch, then fitness.
std::vector<Individual> suggest_variations(const Individual& parent, const sim::Maze& maze, int n,
                                           const EvolutionConfig& config,
                                           const RandomStream& rng, IndividualId first_id,
                                           const sim::SimConfig& sim_config = {});

// Indices of evaluated `batch` in suggestion order: goal reached first, then
// novelty within the batch, then fitness; ties keep batch order.
std::vector<std::size_t> suggestion_order(const std::vector<Individual>& batch, int k_nearest);

// Neuron layout matching the maze robot: nine sensors along the bottom, the
// bias, a row of hidden neurons, and (turn, speed) outputs at the top.
substrate::Substrate maze_substrate(int hidden_count = 4);

// A fully connected-from-inputs minimal genome with N(0, 1) weights.
cppn::Cppn random_genome(RandomStream& rng);

// Generation 0: `seed` (id 1) followed by mutants of it, or random genomes
// over maze_substrate() when no seed is given. Member i draws from
// rng.substream(i). Members are not evaluated.
Population initial_population(const std::optional<Individual>& seed,
                              const EvolutionConfig& config, const RandomStream& rng);

// Headless evolution loop used by the CLI and the acceptance suite.
class EvolutionRun {
 public:
  // Generation 0 is `seed` (when given) plus mutants of it, otherwise random
  // genomes over maze_substrate(); it is evaluated immediately.
  EvolutionRun(sim::Maze maze, SelectionKind mode, EvolutionConfig config,
               std::optional<Individual> seed = std::nullopt, sim::SimConfig sim_config = {});

  void advance();

  const Population& population() const { return population_; }
  const NoveltyArchive& archive() const { return archive_; }
  const Individual& best() const;

  // generation, best fitness, mean fitness, archive size, threshold; tab
  // separated, no trailing newline.
  std::string log_line() const;

 private:
  sim::Maze maze_;
  SelectionKind mode_;
  EvolutionConfig config_;
  sim::SimConfig sim_config_;
  RandomStream root_;
  Population population_;
  NoveltyArchive archive_;
};

}  // namespace brainforge::evo
