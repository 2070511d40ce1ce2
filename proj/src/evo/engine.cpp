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

#include "brainforge/evo/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "brainforge/error.hpp"

namespace brainforge::evo {

std::string_view selection_kind_name(SelectionKind kind) {
  switch (kind) {
    case SelectionKind::kInteractive: return "interactive";
    case SelectionKind::kObjective: return "objective";
    case SelectionKind::kNovelty: return "novelty";
    case SelectionKind::kMixed: return "mixed";
  }
  return "objective";
}

std::optional<SelectionKind> parse_selection_kind(std::string_view name) {
  for (auto k : {SelectionKind::kInteractive, SelectionKind::kObjective, SelectionKind::kNovelty,
                 SelectionKind::kMixed}) {
    if (selection_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

EvolutionConfig EvolutionConfig::interactive() {
  EvolutionConfig c;
  c.pop_size = 9;
  return c;
}

void EvolutionConfig::check() const {
  if (pop_size < 1 || elitism < 0 || elitism >= pop_size) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 <= elitism < pop_size");
  }
  if (!(truncation > 0.0 && truncation <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "truncation fraction must be in (0, 1]");
  }
  if (k_nearest < 1) throw Error(ErrorCode::kInvalidArgument, "k_nearest must be positive");
  mutation.check();
}

namespace {

void require_evaluated(const Population& population) {
  for (const auto& m : population.members) {
    if (!m.eval) {
      throw Error(ErrorCode::kInvalidArgument, "population is not evaluated",
                  "individual " + std::to_string(m.id));
    }
  }
}

std::vector<sim::Point> behaviors_of(const Population& population) {
  std::vector<sim::Point> out;
  for (const auto& m : population.members) out.push_back(m.eval->behavior);
  return out;
}

// Member indices ordered by descending score, ties by position.
std::vector<std::size_t> rank_by(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

std::vector<std::size_t> resolve_selection(const Population& population,
                                           const std::vector<IndividualId>& ids) {
  if (ids.empty()) throw Error(ErrorCode::kInvalidArgument, "selection is empty");
  std::vector<std::size_t> out;
  std::set<IndividualId> seen;
  for (IndividualId id : ids) {
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kInvalidArgument, "individual selected twice", std::to_string(id));
    }
    auto it = std::find_if(population.members.begin(), population.members.end(),
                           [&](const Individual& m) { return m.id == id; });
    if (it == population.members.end()) {
      throw Error(ErrorCode::kInvalidArgument, "selection is not in the population",
                  std::to_string(id));
    }
    out.push_back(static_cast<std::size_t>(it - population.members.begin()));
  }
  return out;
}

Individual make_child(const Individual& parent, IndividualId id, RandomStream rng,
                      const cppn::MutationConfig& mutation) {
  Individual child;
  child.id = id;
  child.parent = parent.id;
  child.genome = cppn::mutate(parent.genome, rng, mutation);
  child.substrate = parent.substrate;
  if (child.genome == parent.genome) child.report = parent.report;
  return child;
}

}  // namespace

GenerationOutcome next_generation(const Population& population, const SelectionMode& mode,
                                  const NoveltyArchive& archive, const EvolutionConfig& config,
                                  const RandomStream& rng) {
  config.check();
  if (population.members.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "population is empty");
  }
  GenerationOutcome out;
  out.archive = archive;
  const std::size_t n = population.members.size();
  const std::size_t truncated = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(config.truncation * static_cast<double>(n))));

  std::vector<std::size_t> pool;
  switch (mode.kind) {
    case SelectionKind::kInteractive:
      pool = resolve_selection(population, mode.selected);
      break;
    case SelectionKind::kObjective: {
      require_evaluated(population);
      std::vector<double> fitness;
      for (const auto& m : population.members) fitness.push_back(m.eval->fitness);
      pool = rank_by(fitness);
      pool.resize(truncated);
      break;
    }
    case SelectionKind::kNovelty:
    case SelectionKind::kMixed: {
      std::vector<std::size_t> picked;
      if (mode.kind == SelectionKind::kMixed) picked = resolve_selection(population, mode.selected);
      require_evaluated(population);
      const auto behaviors = behaviors_of(population);
      out.archive = update_archive(archive, behaviors);
      const auto ranked = rank_by(score_population(behaviors, out.archive, config.k_nearest));
      pool = picked;
      const std::size_t target = std::max(truncated, picked.size());
      for (std::size_t idx : ranked) {
        if (pool.size() >= target) break;
        if (std::find(picked.begin(), picked.end(), idx) == picked.end()) pool.push_back(idx);
      }
      break;
    }
  }

  Population& next = out.population;
  next.generation = population.generation + 1;
  next.next_id = population.next_id;
  const std::size_t elites =
      std::min<std::size_t>(static_cast<std::size_t>(config.elitism), pool.size());
  for (std::size_t e = 0; e < elites; ++e) next.members.push_back(population.members[pool[e]]);
  const std::size_t children = static_cast<std::size_t>(config.pop_size) - elites;
  for (std::size_t j = 0; j < children; ++j) {
    const Individual& parent = population.members[pool[j % pool.size()]];
    next.members.push_back(make_child(parent, next.next_id++, rng.substream(j), config.mutation));
  }
  for (std::size_t idx : pool) out.parents.push_back(population.members[idx].id);
  return out;
}

ann::NetworkPhenotype express(const Individual& individual) {
  return substrate::decode(individual.genome, individual.substrate);
}

void evaluate_individual(Individual& individual, const sim::Maze& maze,
                         const sim::SimConfig& sim_config) {
  individual.eval = sim::evaluate(express(individual), maze, sim_config);
}

void evaluate_population(Population& population, const sim::Maze& maze,
                         const sim::SimConfig& sim_config) {
  for (auto& m : population.members) {
    if (!m.eval) evaluate_individual(m, maze, sim_config);
  }
}

std::vector<std::size_t> suggestion_order(const std::vector<Individual>& batch, int k_nearest) {
  std::vector<sim::Point> behaviors;
  for (const auto& c : batch) {
    if (!c.eval) throw Error(ErrorCode::kInvalidArgument, "candidate is not evaluated");
    behaviors.push_back(c.eval->behavior);
  }
  const auto novelty = score_population(behaviors, NoveltyArchive{}, k_nearest);
  std::vector<std::size_t> order(batch.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = *batch[a].eval;
    const auto& eb = *batch[b].eval;
    if (ea.goal_reached != eb.goal_reached) return ea.goal_reached;
    if (novelty[a] != novelty[b]) return novelty[a] > novelty[b];
    return ea.fitness > eb.fitness;
  });
  return order;
}

std::vector<Individual> suggest_variations(const Individual& parent, const sim::Maze& maze, int n,
                                           const EvolutionConfig& config,
                                           const RandomStream& rng, IndividualId first_id,
                                           const sim::SimConfig& sim_config) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one suggestion");
  const std::size_t batch = 4 * static_cast<std::size_t>(n);
  std::vector<Individual> candidates;
  candidates.reserve(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    candidates.push_back(make_child(parent, first_id + i, rng.substream(i), config.mutation));
    evaluate_individual(candidates.back(), maze, sim_config);
  }
  const auto order = suggestion_order(candidates, config.k_nearest);
  std::vector<Individual> out;
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
    out.push_back(std::move(candidates[order[i]]));
  }
  return out;
}

substrate::Substrate maze_substrate(int hidden_count) {
  using ann::Role;
  substrate::Substrate s;
  // Rangefinders ordered by angle (-90deg .. +90deg); left-hand sensors sit at
  // negative x so the layout reads like the robot's field of view.
  for (int i = 0; i < 5; ++i) {
    const std::string id = "rf" + std::to_string(i);
    s.neurons.push_back({id, Role::kInput, {1.0 - 0.5 * i, -1.0}});
    s.input_order.push_back(id);
  }
  const std::array<std::pair<const char*, ann::Vec2>, 4> radar = {{
      {"radar_front", {0.0, -0.6}},
      {"radar_left", {-0.5, -0.6}},
      {"radar_back", {0.0, -0.8}},
      {"radar_right", {0.5, -0.6}},
  }};
  for (const auto& [id, pos] : radar) {
    s.neurons.push_back({id, Role::kInput, pos});
    s.input_order.push_back(id);
  }
  s.neurons.push_back({"bias", Role::kBias, {0.0, -0.3}});
  for (int i = 0; i < hidden_count; ++i) {
    const double x = -1.0 + (2.0 * i + 1.0) / hidden_count;
    s.neurons.push_back({"h" + std::to_string(i + 1), Role::kHidden, {x, 0.0}});
  }
  s.neurons.push_back({"turn", Role::kOutput, {-0.5, 1.0}});
  s.neurons.push_back({"speed", Role::kOutput, {0.5, 1.0}});
  s.output_order = {"turn", "speed"};
  return s;
}

cppn::Cppn random_genome(RandomStream& rng) {
  cppn::Cppn g = cppn::Cppn::empty();
  for (auto id : cppn::kInputIds) {
    g.connections.push_back({std::string(id), std::string(cppn::kOutputId), rng.normal(),
                             cppn::ConnectionTag::kEvolved});
  }
  return g;
}

Population initial_population(const std::optional<Individual>& seed,
                              const EvolutionConfig& config, const RandomStream& rng) {
  config.check();
  Population pop;
  for (int i = 0; i < config.pop_size; ++i) {
    RandomStream r = rng.substream(static_cast<std::uint64_t>(i));
    Individual ind;
    if (seed && i == 0) {
      ind = *seed;
      ind.parent.reset();
      ind.eval.reset();
    } else if (seed) {
      ind = make_child(*seed, 0, r, config.mutation);
      ind.parent = pop.members.front().id;
    } else {
      ind.genome = random_genome(r);
      ind.substrate = maze_substrate();
    }
    ind.id = pop.next_id++;
    pop.members.push_back(std::move(ind));
  }
  return pop;
}

EvolutionRun::EvolutionRun(sim::Maze maze, SelectionKind mode, EvolutionConfig config,
                           std::optional<Individual> seed, sim::SimConfig sim_config)
    : maze_(std::move(maze)),
      mode_(mode),
      config_(std::move(config)),
      sim_config_(sim_config),
      root_(config_.seed) {
  config_.check();
  if (mode_ == SelectionKind::kInteractive || mode_ == SelectionKind::kMixed) {
    throw Error(ErrorCode::kInvalidArgument, "headless runs support objective and novelty only");
  }
  population_ = initial_population(seed, config_, root_.substream(0));
  evaluate_population(population_, maze_, sim_config_);
}

void EvolutionRun::advance() {
  const SelectionMode mode{mode_, {}};
  const RandomStream rng = root_.substream(static_cast<std::uint64_t>(population_.generation) + 1);
  GenerationOutcome out = next_generation(population_, mode, archive_, config_, rng);
  population_ = std::move(out.population);
  archive_ = std::move(out.archive);
  evaluate_population(population_, maze_, sim_config_);
}

const Individual& EvolutionRun::best() const {
  return *std::max_element(population_.members.begin(), population_.members.end(),
                           [](const Individual& a, const Individual& b) {
                             return a.eval->fitness < b.eval->fitness;
                           });
}

std::string EvolutionRun::log_line() const {
  double best_fitness = 0.0;
  double sum = 0.0;
  for (const auto& m : population_.members) {
    best_fitness = std::max(best_fitness, m.eval->fitness);
    sum += m.eval->fitness;
  }
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(6);
  line << population_.generation << '\t' << best_fitness << '\t'
       << sum / static_cast<double>(population_.members.size()) << '\t' << archive_.points.size()
       << '\t' << archive_.add_threshold;
  return line.str();
}

}  // namespace brainforge::evo
