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
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "brainforge/compiler/annotations.hpp"
#include "brainforge/compiler/compiler.hpp"
#include "brainforge/cppn/cppn.hpp"
#include "brainforge/evo/engine.hpp"
#include "brainforge/io/json_io.hpp"
#include "brainforge/sim/maze.hpp"

namespace brainforge::service {

struct BrainRecord {
  std::string id;
  std::string author;
  std::optional<std::string> parent_id;
  std::string maze_id;
  compiler::AnnotatedNetwork anet;
  cppn::Cppn cppn;
  compiler::CompilationReport report;
  std::optional<double> best_fitness;  // empty until evaluated
  std::int64_t created_at = 0;         // UTC seconds
  friend bool operator==(const BrainRecord&, const BrainRecord&) = default;
};

struct NewBrain {
  std::string author;
  std::optional<std::string> parent_id;
  std::string maze_id;
  compiler::AnnotatedNetwork anet;
  // Both or neither. When absent the store compiles `anet` itself.
  std::optional<cppn::Cppn> cppn;
  std::optional<compiler::CompilationReport> report;
};

struct LeaderboardEntry {
  std::string brain_id;
  std::string author;
  double best_fitness = 0.0;
};

struct Session {
  std::string id;
  std::string brain_id;
  std::string maze_id;
  evo::SelectionKind mode = evo::SelectionKind::kInteractive;
  evo::EvolutionConfig config;
  evo::Population population;  // the current candidates, evaluated
  evo::NoveltyArchive archive;
  std::vector<evo::IndividualId> last_parents;
};

struct StoreEvent {
  std::uint64_t seq = 0;
  std::string kind;  // brain-created, brain-edited, evaluation-recorded, session-step
  io::Json payload;
};

struct AuditReport {
  std::size_t events = 0;
  std::size_t brains = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

using Clock = std::function<std::int64_t()>;
std::int64_t system_clock_seconds();

io::Json record_to_json(const BrainRecord& record);
BrainRecord record_from_json(const io::Json& json);
io::Json session_to_json(const Session& session);

// Brains, evaluations and IEC sessions over an append-only event log
// (<dir>/events.jsonl). Every mutation is appended before it is applied, and
// opening a directory replays the log, so the log alone defines the state.
// Writers are serialized; readers share a lock.
class Store {
 public:
  // An empty `dir` keeps the log in memory only.
  Store(std::string dir, std::map<std::string, sim::Maze> mazes, Clock clock = system_clock_seconds);

  static std::map<std::string, sim::Maze> load_maze_dir(const std::string& dir);

  BrainRecord save_brain(const NewBrain& brain);
  BrainRecord get_brain(const std::string& id) const;
  BrainRecord fork_brain(const std::string& id, const std::string& author);
  // Nearest parent first.
  std::vector<std::string> ancestry(const std::string& id) const;
  std::vector<LeaderboardEntry> leaderboard(const std::string& maze_id, std::size_t limit) const;
  sim::EvaluationResult evaluate_brain(const std::string& id);
  // apply_annotated_edit and recompile_edit together; nothing changes on error.
  BrainRecord edit_brain(const std::string& id, const ann::NetworkEdit& edit);

  Session create_session(const std::string& brain_id, evo::SelectionKind mode,
                         std::uint64_t seed = 0);
  Session breed(const std::string& session_id, const std::vector<evo::IndividualId>& selections,
                std::optional<evo::SelectionKind> mode = std::nullopt);
  Session get_session(const std::string& id) const;

  std::vector<BrainRecord> brains() const;  // creation order
  std::vector<StoreEvent> events() const;
  const std::map<std::string, sim::Maze>& mazes() const { return mazes_; }
  const sim::Maze& maze(const std::string& id) const;

 private:
  StoreEvent append(std::string kind, io::Json payload);
  void apply(const StoreEvent& event);
  const BrainRecord& brain_ref(const std::string& id) const;
  const Session& session_ref(const std::string& id) const;

  std::string dir_;
  std::map<std::string, sim::Maze> mazes_;
  Clock clock_;
  mutable std::shared_mutex mutex_;
  std::vector<StoreEvent> log_;
  std::vector<BrainRecord> brains_;
  std::map<std::string, std::size_t> brain_index_;
  std::map<std::string, Session> sessions_;
};

// Replays <dir>/events.jsonl into a fresh store and re-verifies every stored
// (anet, cppn) pair, the report, parent links and the event sequence.
AuditReport audit_store(const std::string& dir, const std::map<std::string, sim::Maze>& mazes);

}  // namespace brainforge::service
