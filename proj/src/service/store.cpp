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

#include "brainforge/service/store.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>

#include "brainforge/error.hpp"
#include "brainforge/substrate/decoder.hpp"

namespace brainforge::service {

namespace fs = std::filesystem;
using io::Json;

namespace {

constexpr const char* kLogName = "events.jsonl";

Json config_to_json(const evo::EvolutionConfig& c) {
  const auto& m = c.mutation;
  return {{"pop_size", c.pop_size},
          {"elitism", c.elitism},
          {"truncation", c.truncation},
          {"k_nearest", c.k_nearest},
          {"seed", c.seed},
          {"mutation",
           {{"p_perturb_genome", m.p_perturb_genome},
            {"p_perturb_each", m.p_perturb_each},
            {"sigma_evolved", m.sigma_evolved},
            {"sigma_geometry", m.sigma_geometry},
            {"mutate_sharpness", m.mutate_sharpness},
            {"p_add_connection", m.p_add_connection},
            {"p_add_node", m.p_add_node},
            {"p_change_activation", m.p_change_activation}}}};
}

evo::EvolutionConfig config_from_json(const Json& j) {
  evo::EvolutionConfig c;
  c.pop_size = j.at("pop_size").get<int>();
  c.elitism = j.at("elitism").get<int>();
  c.truncation = j.at("truncation").get<double>();
  c.k_nearest = j.at("k_nearest").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  const Json& m = j.at("mutation");
  c.mutation.p_perturb_genome = m.at("p_perturb_genome").get<double>();
  c.mutation.p_perturb_each = m.at("p_perturb_each").get<double>();
  c.mutation.sigma_evolved = m.at("sigma_evolved").get<double>();
  c.mutation.sigma_geometry = m.at("sigma_geometry").get<double>();
  c.mutation.mutate_sharpness = m.at("mutate_sharpness").get<bool>();
  c.mutation.p_add_connection = m.at("p_add_connection").get<double>();
  c.mutation.p_add_node = m.at("p_add_node").get<double>();
  c.mutation.p_change_activation = m.at("p_change_activation").get<double>();
  return c;
}

Session session_from_json(const Json& j) {
  Session s;
  s.id = j.at("id").get<std::string>();
  s.brain_id = j.at("brain_id").get<std::string>();
  s.maze_id = j.at("maze_id").get<std::string>();
  const auto mode = evo::parse_selection_kind(j.at("mode").get<std::string>());
  if (!mode) throw Error(ErrorCode::kSchema, "unknown selection mode", "mode");
  s.mode = *mode;
  s.config = config_from_json(j.at("config"));
  s.population = io::population_from_json(j.at("population"));
  s.archive = io::archive_from_json(j.at("archive"));
  s.last_parents = j.at("parents").get<std::vector<evo::IndividualId>>();
  return s;
}

Json event_to_json(const StoreEvent& e) {
  return {{"seq", e.seq}, {"kind", e.kind}, {"payload", e.payload}};
}

StoreEvent event_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("seq") || !j.contains("kind") || !j.contains("payload")) {
    throw Error(ErrorCode::kSchema, "malformed event");
  }
  return {j.at("seq").get<std::uint64_t>(), j.at("kind").get<std::string>(), j.at("payload")};
}

// Verifies that the genotype regenerates the annotated network and that the
// report describes this genotype over exactly that network's neurons.
void verify_pair(const compiler::AnnotatedNetwork& anet, const cppn::Cppn& genome,
                 const compiler::CompilationReport& report) {
  const auto expanded = compiler::expand_annotations(anet).phenotype;
  ann::require_valid(expanded);
  compiler::check_report(genome, report);
  if (report.substrate != substrate::substrate_from_phenotype(expanded)) {
    throw Error(ErrorCode::kRoundTrip, "report substrate does not match the annotated network");
  }
  const auto diff = compiler::round_trip_diff(genome, expanded);
  if (!diff.matches(compiler::kRoundTripTolerance)) {
    std::string detail = "max weight error " + std::to_string(diff.max_weight_error);
    if (!diff.missing.empty()) detail += ", " + std::to_string(diff.missing.size()) + " missing";
    if (!diff.spurious.empty()) detail += ", " + std::to_string(diff.spurious.size()) + " spurious";
    throw Error(ErrorCode::kRoundTrip, "genotype does not decode to the submitted network", detail);
  }
}

}  // namespace

std::int64_t system_clock_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

Json record_to_json(const BrainRecord& r) {
  Json j;
  j["id"] = r.id;
  j["author"] = r.author;
  j["parent_id"] = r.parent_id ? Json(*r.parent_id) : Json(nullptr);
  j["maze_id"] = r.maze_id;
  j["anet"] = io::annotated_to_json(r.anet);
  j["cppn"] = io::cppn_to_json(r.cppn);
  j["report"] = io::report_to_json(r.report);
  j["best_fitness"] = r.best_fitness ? Json(*r.best_fitness) : Json(nullptr);
  j["created_at"] = r.created_at;
  return j;
}

BrainRecord record_from_json(const Json& j) {
  BrainRecord r;
  r.id = j.at("id").get<std::string>();
  r.author = j.at("author").get<std::string>();
  if (!j.at("parent_id").is_null()) r.parent_id = j.at("parent_id").get<std::string>();
  r.maze_id = j.at("maze_id").get<std::string>();
  r.anet = io::annotated_from_json(j.at("anet"));
  r.cppn = io::cppn_from_json(j.at("cppn"));
  r.report = io::report_from_json(j.at("report"));
  if (!j.at("best_fitness").is_null()) r.best_fitness = j.at("best_fitness").get<double>();
  r.created_at = j.at("created_at").get<std::int64_t>();
  return r;
}

Json session_to_json(const Session& s) {
  Json j;
  j["id"] = s.id;
  j["brain_id"] = s.brain_id;
  j["maze_id"] = s.maze_id;
  j["mode"] = evo::selection_kind_name(s.mode);
  j["config"] = config_to_json(s.config);
  j["population"] = io::population_to_json(s.population);
  j["archive"] = io::archive_to_json(s.archive);
  j["parents"] = s.last_parents;
  return j;
}

Store::Store(std::string dir, std::map<std::string, sim::Maze> mazes, Clock clock)
    : dir_(std::move(dir)), mazes_(std::move(mazes)), clock_(std::move(clock)) {
  if (dir_.empty()) return;
  fs::create_directories(dir_);
  const fs::path path = fs::path(dir_) / kLogName;
  if (!fs::exists(path)) return;
  std::ifstream in(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    StoreEvent e;
    try {
      e = event_from_json(io::parse_json(line));
    } catch (const Error& err) {
      throw Error(ErrorCode::kParse, "corrupt event log", "line " + std::to_string(line_no));
    }
    if (e.seq != log_.size() + 1) {
      throw Error(ErrorCode::kConflict, "event sequence is not strictly increasing",
                  "line " + std::to_string(line_no));
    }
    apply(e);
    log_.push_back(std::move(e));
  }
}

std::map<std::string, sim::Maze> Store::load_maze_dir(const std::string& dir) {
  std::map<std::string, sim::Maze> out;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".maze") files.push_back(entry.path());
  }
  for (const auto& f : files) out.emplace(f.stem().string(), sim::load_maze_file(f.string()));
  return out;
}

StoreEvent Store::append(std::string kind, Json payload) {
  StoreEvent e{log_.size() + 1, std::move(kind), std::move(payload)};
  if (!dir_.empty()) {
    std::ofstream out(fs::path(dir_) / kLogName, std::ios::app | std::ios::binary);
    out << io::dump(event_to_json(e)) << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "cannot append to event log", dir_);
  }
  apply(e);
  log_.push_back(e);
  return e;
}

void Store::apply(const StoreEvent& e) {
  const Json& p = e.payload;
  if (e.kind == "brain-created") {
    BrainRecord r = record_from_json(p);
    brain_index_[r.id] = brains_.size();
    brains_.push_back(std::move(r));
  } else if (e.kind == "brain-edited") {
    BrainRecord& r = brains_.at(brain_index_.at(p.at("id").get<std::string>()));
    r.anet = io::annotated_from_json(p.at("anet"));
    r.cppn = io::cppn_from_json(p.at("cppn"));
    r.report = io::report_from_json(p.at("report"));
    r.best_fitness.reset();  // earlier evaluations describe a different network
  } else if (e.kind == "evaluation-recorded") {
    BrainRecord& r = brains_.at(brain_index_.at(p.at("id").get<std::string>()));
    const double f = p.at("fitness").get<double>();
    if (!r.best_fitness || f > *r.best_fitness) r.best_fitness = f;
  } else if (e.kind == "session-step") {
    Session s = session_from_json(p);
    sessions_[s.id] = std::move(s);
  } else {
    throw Error(ErrorCode::kSchema, "unknown event kind", e.kind);
  }
}

const sim::Maze& Store::maze(const std::string& id) const {
  auto it = mazes_.find(id);
  if (it == mazes_.end()) throw Error(ErrorCode::kNotFound, "unknown maze", id);
  return it->second;
}

const BrainRecord& Store::brain_ref(const std::string& id) const {
  auto it = brain_index_.find(id);
  if (it == brain_index_.end()) throw Error(ErrorCode::kNotFound, "unknown brain", id);
  return brains_[it->second];
}

const Session& Store::session_ref(const std::string& id) const {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kNotFound, "unknown session", id);
  return it->second;
}

BrainRecord Store::save_brain(const NewBrain& brain) {
  std::unique_lock lock(mutex_);
  maze(brain.maze_id);
  if (brain.parent_id) brain_ref(*brain.parent_id);
  if (brain.cppn.has_value() != brain.report.has_value()) {
    throw Error(ErrorCode::kInvalidArgument, "cppn and report must be given together");
  }
  BrainRecord r;
  r.id = "b" + std::to_string(brains_.size() + 1);
  r.author = brain.author;
  r.parent_id = brain.parent_id;
  r.maze_id = brain.maze_id;
  r.anet = brain.anet;
  if (brain.cppn) {
    r.cppn = *brain.cppn;
    r.report = *brain.report;
  } else {
    auto compiled = compiler::compile(brain.anet);
    r.cppn = std::move(compiled.cppn);
    r.report = std::move(compiled.report);
  }
  verify_pair(r.anet, r.cppn, r.report);
  r.created_at = clock_();
  append("brain-created", record_to_json(r));
  return brains_.back();
}

BrainRecord Store::get_brain(const std::string& id) const {
  std::shared_lock lock(mutex_);
  return brain_ref(id);
}

BrainRecord Store::fork_brain(const std::string& id, const std::string& author) {
  std::unique_lock lock(mutex_);
  BrainRecord r = brain_ref(id);
  r.id = "b" + std::to_string(brains_.size() + 1);
  r.author = author;
  r.parent_id = id;
  r.best_fitness.reset();
  r.created_at = clock_();
  append("brain-created", record_to_json(r));
  return brains_.back();
}

std::vector<std::string> Store::ancestry(const std::string& id) const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  const BrainRecord* r = &brain_ref(id);
  while (r->parent_id) {
    out.push_back(*r->parent_id);
    r = &brain_ref(*r->parent_id);
  }
  return out;
}

std::vector<LeaderboardEntry> Store::leaderboard(const std::string& maze_id,
                                                 std::size_t limit) const {
  std::shared_lock lock(mutex_);
  maze(maze_id);
  std::vector<const BrainRecord*> ranked;
  for (const auto& r : brains_) {
    if (r.maze_id == maze_id && r.best_fitness) ranked.push_back(&r);
  }
  // brains_ is in creation order, so a stable sort keeps equal timestamps in
  // creation order too.
  std::stable_sort(ranked.begin(), ranked.end(), [](const BrainRecord* a, const BrainRecord* b) {
    if (*a->best_fitness != *b->best_fitness) return *a->best_fitness > *b->best_fitness;
    return a->created_at < b->created_at;
  });
  std::vector<LeaderboardEntry> out;
  for (std::size_t i = 0; i < ranked.size() && i < limit; ++i) {
    out.push_back({ranked[i]->id, ranked[i]->author, *ranked[i]->best_fitness});
  }
  return out;
}

sim::EvaluationResult Store::evaluate_brain(const std::string& id) {
  std::unique_lock lock(mutex_);
  const BrainRecord& r = brain_ref(id);
  const auto phenotype = substrate::decode(r.cppn, r.report.substrate);
  auto result = sim::evaluate(phenotype, maze(r.maze_id));
  append("evaluation-recorded", {{"id", id},
                                 {"maze_id", r.maze_id},
                                 {"fitness", result.fitness},
                                 {"goal_reached", result.goal_reached},
                                 {"steps_used", result.steps_used},
                                 {"behavior", {result.behavior.x, result.behavior.y}}});
  return result;
}

BrainRecord Store::edit_brain(const std::string& id, const ann::NetworkEdit& edit) {
  std::unique_lock lock(mutex_);
  const BrainRecord& r = brain_ref(id);
  const auto anet = compiler::apply_annotated_edit(r.anet, edit);
  const auto compiled = compiler::recompile_edit(r.cppn, r.report, edit);
  verify_pair(anet, compiled.cppn, compiled.report);
  append("brain-edited", {{"id", id},
                          {"edit", io::edit_to_json(edit)},
                          {"anet", io::annotated_to_json(anet)},
                          {"cppn", io::cppn_to_json(compiled.cppn)},
                          {"report", io::report_to_json(compiled.report)}});
  return brain_ref(id);
}

Session Store::create_session(const std::string& brain_id, evo::SelectionKind mode,
                              std::uint64_t seed) {
  std::unique_lock lock(mutex_);
  const BrainRecord& r = brain_ref(brain_id);
  Session s;
  s.id = "s" + std::to_string(sessions_.size() + 1);
  s.brain_id = brain_id;
  s.maze_id = r.maze_id;
  s.mode = mode;
  s.config = evo::EvolutionConfig::interactive();
  s.config.seed = seed;
  evo::Individual root;
  root.genome = r.cppn;
  root.report = r.report;
  root.substrate = r.report.substrate;
  s.population = evo::initial_population(root, s.config, RandomStream(seed).substream(0));
  evo::evaluate_population(s.population, maze(s.maze_id), {});
  append("session-step", session_to_json(s));
  return sessions_.at(s.id);
}

Session Store::breed(const std::string& session_id,
                     const std::vector<evo::IndividualId>& selections,
                     std::optional<evo::SelectionKind> mode) {
  std::unique_lock lock(mutex_);
  Session s = session_ref(session_id);
  if (mode) s.mode = *mode;
  const evo::SelectionMode selection{s.mode, selections};
  const RandomStream rng =
      RandomStream(s.config.seed).substream(static_cast<std::uint64_t>(s.population.generation) + 1);
  auto out = evo::next_generation(s.population, selection, s.archive, s.config, rng);
  evo::evaluate_population(out.population, maze(s.maze_id), {});
  s.population = std::move(out.population);
  s.archive = std::move(out.archive);
  s.last_parents = std::move(out.parents);
  append("session-step", session_to_json(s));
  return sessions_.at(s.id);
}

Session Store::get_session(const std::string& id) const {
  std::shared_lock lock(mutex_);
  return session_ref(id);
}

std::vector<BrainRecord> Store::brains() const {
  std::shared_lock lock(mutex_);
  return brains_;
}

std::vector<StoreEvent> Store::events() const {
  std::shared_lock lock(mutex_);
  return log_;
}

AuditReport audit_store(const std::string& dir, const std::map<std::string, sim::Maze>& mazes) {
  AuditReport report;
  std::optional<Store> store;
  try {
    store.emplace(dir, mazes);
  } catch (const Error& e) {
    report.failures.push_back(std::string("replay: ") + e.what() + " (" + e.detail() + ")");
    return report;
  }
  const auto events = store->events();
  report.events = events.size();
  // Best fitness must be the maximum evaluation since the last edit.
  std::map<std::string, std::optional<double>> expected_best;
  for (const auto& e : events) {
    const auto id = e.payload.contains("id") ? e.payload.at("id").get<std::string>() : "";
    if (e.kind == "brain-created") {
      expected_best[id] = std::nullopt;
    } else if (e.kind == "brain-edited") {
      expected_best[id].reset();
    } else if (e.kind == "evaluation-recorded") {
      auto& best = expected_best[id];
      const double f = e.payload.at("fitness").get<double>();
      if (!best || f > *best) best = f;
    }
  }
  std::set<std::string> seen;
  for (const auto& r : store->brains()) {
    ++report.brains;
    const auto fail = [&](const std::string& what) { report.failures.push_back(r.id + ": " + what); };
    if (r.parent_id && !seen.count(*r.parent_id)) fail("parent " + *r.parent_id + " is not an earlier record");
    if (!mazes.count(r.maze_id)) fail("unknown maze " + r.maze_id);
    try {
      verify_pair(r.anet, r.cppn, r.report);
    } catch (const Error& e) {
      fail(std::string(e.what()) + (e.detail().empty() ? "" : " (" + e.detail() + ")"));
    }
    if (r.best_fitness != expected_best[r.id]) fail("best_fitness does not match its evaluations");
    seen.insert(r.id);
  }
  return report;
}

}  // namespace brainforge::service
