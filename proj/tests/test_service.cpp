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

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "brainforge/compiler/compiler.hpp"
#include "brainforge/error.hpp"
#include "brainforge/io/json_io.hpp"
#include "brainforge/service/api.hpp"
#include "brainforge/service/store.hpp"
#include "doctest.h"
#include "httplib.h"
#include "support.hpp"

using namespace brainforge;
using service::Store;
namespace fs = std::filesystem;

namespace {

const std::map<std::string, sim::Maze>& mazes() {
  static const auto m = Store::load_maze_dir(BRAINFORGE_MAZE_DIR);
  return m;
}

// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("brainforge-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(++counter));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

// Counts up one second per call.
service::Clock ticking_clock(std::int64_t start = 1000) {
  auto t = std::make_shared<std::int64_t>(start);
  return [t] { return (*t)++; };
}

service::NewBrain new_brain(const compiler::AnnotatedNetwork& anet, std::string maze = "easy",
                            std::string author = "ada") {
  service::NewBrain nb;
  nb.author = std::move(author);
  nb.maze_id = std::move(maze);
  nb.anet = anet;
  return nb;
}

compiler::AnnotatedNetwork stationary_design() {
  compiler::AnnotatedNetwork a;
  const auto s = evo::maze_substrate(0);
  a.phenotype.neurons = s.neurons;
  a.phenotype.input_order = s.input_order;
  a.phenotype.output_order = s.output_order;
  for (const auto& n : s.neurons) {
    if (n.role == ann::Role::kInput || n.role == ann::Role::kBias) {
      a.phenotype.connections.push_back({n.id, "speed", -3.0});
    }
  }
  return a;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kIo;
}

void append_raw_event(const TempDir& dir, std::uint64_t seq, const std::string& kind,
                      const io::Json& payload) {
  std::ofstream out(dir.path / "events.jsonl", std::ios::app);
  out << io::dump(io::Json{{"seq", seq}, {"kind", kind}, {"payload", payload}}) << '\n';
}

}  // namespace

TEST_CASE("save_brain then get_brain returns the same record") {
  Store store("", mazes(), ticking_clock());
  RandomStream rng(1);
  const auto anet = testing::random_maze_brain(rng);
  const auto saved = store.save_brain(new_brain(anet));
  CHECK(saved.id == "b1");
  CHECK(saved.anet == anet);
  CHECK(store.get_brain("b1") == saved);
  CHECK_FALSE(saved.best_fitness.has_value());
  CHECK(code_of([&] { store.get_brain("b9"); }) == ErrorCode::kNotFound);
}

TEST_CASE("save_brain rejects inconsistent input") {
  Store store("", mazes(), ticking_clock());
  RandomStream rng(2);
  const auto anet = testing::random_maze_brain(rng);
  SUBCASE("dangling parent") {
    auto nb = new_brain(anet);
    nb.parent_id = "b77";
    CHECK(code_of([&] { store.save_brain(nb); }) == ErrorCode::kNotFound);
  }
  SUBCASE("unknown maze") {
    CHECK(code_of([&] { store.save_brain(new_brain(anet, "labyrinth")); }) == ErrorCode::kNotFound);
  }
  SUBCASE("genotype that does not regenerate the design") {
    auto compiled = compiler::compile(anet);
    auto it = std::find_if(compiled.cppn.connections.begin(), compiled.cppn.connections.end(),
                           [](const auto& c) { return c.tag == cppn::ConnectionTag::kOrbitWeight; });
    REQUIRE(it != compiled.cppn.connections.end());
    it->weight += 0.5;
    auto nb = new_brain(anet);
    nb.cppn = compiled.cppn;
    nb.report = compiled.report;
    CHECK(code_of([&] { store.save_brain(nb); }) == ErrorCode::kRoundTrip);
    CHECK(store.brains().empty());
  }
  SUBCASE("supplied pair that matches is accepted") {
    const auto compiled = compiler::compile(anet);
    auto nb = new_brain(anet);
    nb.cppn = compiled.cppn;
    nb.report = compiled.report;
    CHECK(store.save_brain(nb).cppn == compiled.cppn);
  }
}

TEST_CASE("forks and ancestry") {
  Store store("", mazes(), ticking_clock());
  RandomStream rng(3);
  const auto a = store.save_brain(new_brain(testing::random_maze_brain(rng)));
  const auto b = store.fork_brain(a.id, "grace");
  const auto c = store.fork_brain(b.id, "alan");
  CHECK(b.parent_id == a.id);
  CHECK(b.author == "grace");
  CHECK(io::dump(io::annotated_to_json(b.anet)) == io::dump(io::annotated_to_json(a.anet)));
  CHECK(b.cppn == a.cppn);
  CHECK(store.ancestry(c.id) == std::vector<std::string>{b.id, a.id});
  CHECK(store.ancestry(a.id).empty());
  CHECK(code_of([&] { store.fork_brain("b42", "x"); }) == ErrorCode::kNotFound);
}

TEST_CASE("leaderboard ordering") {
  TempDir dir("board");
  {
    Store store(dir.str(), mazes(), ticking_clock());
    RandomStream rng(4);
    for (int i = 0; i < 3; ++i) store.save_brain(new_brain(testing::random_maze_brain(rng), "hard"));
    store.save_brain(new_brain(testing::random_maze_brain(rng), "easy"));
  }
  // Recorded scores written straight into the log.
  const double scores[] = {1.9, 0.5, 1.2};
  for (int i = 0; i < 3; ++i) {
    append_raw_event(dir, 5 + i, "evaluation-recorded",
                     {{"id", "b" + std::to_string(i + 1)}, {"maze_id", "hard"},
                      {"fitness", scores[i]}, {"goal_reached", scores[i] > 1.0},
                      {"steps_used", 10}, {"behavior", {0.5, 0.5}}});
  }
  Store store(dir.str(), mazes(), ticking_clock());
  const auto board = store.leaderboard("hard", 10);
  REQUIRE(board.size() == 3);
  CHECK(board[0].best_fitness == 1.9);
  CHECK(board[1].best_fitness == 1.2);
  CHECK(board[2].best_fitness == 0.5);
  CHECK(board[0].brain_id == "b1");
  CHECK(store.leaderboard("hard", 2).size() == 2);
  CHECK(store.leaderboard("easy", 10).empty());  // never evaluated
  CHECK(code_of([&] { store.leaderboard("nowhere", 3); }) == ErrorCode::kNotFound);
}

TEST_CASE("leaderboard ties fall back to creation time") {
  Store store("", mazes(), ticking_clock());
  const auto design = stationary_design();
  const auto first = store.save_brain(new_brain(design, "open"));
  const auto second = store.save_brain(new_brain(design, "open"));
  CHECK(first.created_at < second.created_at);
  store.evaluate_brain(second.id);
  store.evaluate_brain(first.id);
  const auto board = store.leaderboard("open", 10);
  REQUIRE(board.size() == 2);
  CHECK(board[0].best_fitness == board[1].best_fitness);
  CHECK(board[0].brain_id == first.id);
}

TEST_CASE("evaluate_brain") {
  Store store("", mazes(), ticking_clock());
  SUBCASE("a stationary design scores zero") {
    const auto id = store.save_brain(new_brain(stationary_design(), "open")).id;
    const auto r = store.evaluate_brain(id);
    CHECK(r.fitness == 0.0);
    CHECK(store.get_brain(id).best_fitness == 0.0);
  }
  SUBCASE("repeatable and best_fitness only rises") {
    RandomStream rng(5);
    const auto id = store.save_brain(new_brain(testing::random_maze_brain(rng))).id;
    const auto r1 = store.evaluate_brain(id);
    const auto r2 = store.evaluate_brain(id);
    CHECK(r1 == r2);
    CHECK(store.get_brain(id).best_fitness == r1.fitness);
  }
  SUBCASE("unknown id") { CHECK(code_of([&] { store.evaluate_brain("b3"); }) == ErrorCode::kNotFound); }
}

TEST_CASE("edit_brain keeps the pair consistent") {
  Store store("", mazes(), ticking_clock());
  RandomStream rng(6);
  const auto rec = store.save_brain(new_brain(testing::random_maze_brain(rng)));
  store.evaluate_brain(rec.id);
  const auto& c = rec.anet.phenotype.connections.front();
  const auto edited = store.edit_brain(rec.id, ann::edit::SetWeight{c.src, c.dst, 0.25});
  CHECK_FALSE(edited.best_fitness.has_value());
  const auto expanded = compiler::expand_annotations(edited.anet).phenotype;
  CHECK(compiler::round_trip_diff(edited.cppn, expanded).matches(1e-3));
  const auto before = store.events().size();
  CHECK(code_of([&] { store.edit_brain(rec.id, ann::edit::RemoveNeuron{"ghost"}); }) ==
        ErrorCode::kNotFound);
  CHECK(store.events().size() == before);
}

TEST_CASE("interactive sessions") {
  Store store("", mazes(), ticking_clock());
  RandomStream rng(7);
  const auto brain = store.save_brain(new_brain(testing::random_maze_brain(rng)));
  const auto s = store.create_session(brain.id, evo::SelectionKind::kInteractive, 3);
  REQUIRE(s.population.members.size() == 9);
  CHECK(s.population.members[0].genome == brain.cppn);
  for (const auto& m : s.population.members) CHECK(m.eval.has_value());

  const std::vector<evo::IndividualId> picks = {s.population.members[4].id,
                                                s.population.members[1].id};
  const auto next = store.breed(s.id, picks);
  CHECK(next.population.generation == 1);
  CHECK(next.population.members.size() == 9);
  for (auto p : next.last_parents) CHECK(std::find(picks.begin(), picks.end(), p) != picks.end());

  SUBCASE("same seed and selections give the same candidates") {
    Store other("", mazes(), ticking_clock());
    other.save_brain(new_brain(brain.anet));
    const auto s2 = other.create_session("b1", evo::SelectionKind::kInteractive, 3);
    const auto n2 = other.breed(s2.id, picks);
    CHECK(io::dump(io::population_to_json(n2.population)) ==
          io::dump(io::population_to_json(next.population)));
  }
  SUBCASE("mixed mode keeps the pick and fills by novelty") {
    const std::vector<evo::IndividualId> one = {next.population.members[6].id};
    const auto mixed = store.breed(s.id, one, evo::SelectionKind::kMixed);
    REQUIRE(mixed.last_parents.size() == 3);
    CHECK(mixed.last_parents[0] == one[0]);
    CHECK(mixed.mode == evo::SelectionKind::kMixed);
  }
  SUBCASE("bad selections") {
    CHECK(code_of([&] { store.breed(s.id, {}); }) == ErrorCode::kInvalidArgument);
    CHECK(code_of([&] { store.breed(s.id, {123456}); }) == ErrorCode::kInvalidArgument);
    CHECK(code_of([&] { store.breed("s99", picks); }) == ErrorCode::kNotFound);
  }
}

TEST_CASE("the log alone reproduces the store") {
  TempDir dir("replay");
  std::vector<service::BrainRecord> snapshot;
  std::string session_json;
  {
    Store store(dir.str(), mazes(), ticking_clock());
    RandomStream rng(8);
    const auto a = store.save_brain(new_brain(testing::random_maze_brain(rng)));
    const auto b = store.fork_brain(a.id, "bob");
    store.evaluate_brain(b.id);
    const auto& c = b.anet.phenotype.connections.back();
    store.edit_brain(b.id, ann::edit::SetWeight{c.src, c.dst, -1.0});
    store.evaluate_brain(b.id);
    const auto s = store.create_session(a.id, evo::SelectionKind::kInteractive);
    store.breed(s.id, {s.population.members[2].id});
    snapshot = store.brains();
    session_json = io::dump(service::session_to_json(store.get_session(s.id)));
  }
  Store replay(dir.str(), mazes(), ticking_clock(5000));
  CHECK(replay.brains() == snapshot);
  CHECK(io::dump(service::session_to_json(replay.get_session("s1"))) == session_json);
  const auto audit = service::audit_store(dir.str(), mazes());
  CHECK(audit.ok());
  CHECK(audit.brains == 2);
}

TEST_CASE("audit flags a tampered log") {
  TempDir dir("tamper");
  {
    Store store(dir.str(), mazes(), ticking_clock());
    RandomStream rng(9);
    store.save_brain(new_brain(testing::random_maze_brain(rng)));
  }
  append_raw_event(dir, 2, "evaluation-recorded",
                   {{"id", "b1"}, {"maze_id", "easy"}, {"fitness", 0.3}, {"goal_reached", false},
                    {"steps_used", 400}, {"behavior", {0.5, 0.5}}});
  CHECK(service::audit_store(dir.str(), mazes()).ok());
  append_raw_event(dir, 9, "evaluation-recorded",
                   {{"id", "b1"}, {"maze_id", "easy"}, {"fitness", 0.4}, {"goal_reached", false},
                    {"steps_used", 400}, {"behavior", {0.5, 0.5}}});
  CHECK_FALSE(service::audit_store(dir.str(), mazes()).ok());
}

TEST_CASE("api routes") {
  Store store("", mazes(), ticking_clock());
  service::Api api(store);
  RandomStream rng(10);
  const auto anet = testing::random_maze_brain(rng);
  const io::Json create = {{"author", "ada"}, {"maze_id", "easy"},
                           {"anet", io::annotated_to_json(anet)}};

  auto r = api.handle("POST", "/brains", {}, io::dump(create));
  REQUIRE(r.status == 201);
  CHECK(r.body.at("id") == "b1");

  CHECK(api.handle("GET", "/brains/b1", {}, "").status == 200);
  CHECK(api.handle("GET", "/brains/b2", {}, "").status == 404);
  CHECK(api.handle("GET", "/brains/b2", {}, "").body.at("code") == "not_found");

  r = api.handle("POST", "/brains/b1/fork", {}, R"({"author":"eve"})");
  CHECK(r.status == 201);
  CHECK(r.body.at("parent_id") == "b1");

  r = api.handle("POST", "/brains/b1/evaluate", {}, "");
  CHECK(r.status == 200);
  CHECK(r.body.contains("fitness"));

  const auto& c = anet.phenotype.connections.front();
  r = api.handle("POST", "/brains/b1/edits", {},
                 io::dump(io::edit_to_json(ann::edit::SetWeight{c.src, c.dst, 0.5})));
  CHECK(r.status == 200);

  r = api.handle("GET", "/mazes", {}, "");
  CHECK(r.body.at("mazes").size() == mazes().size());
  CHECK(api.handle("GET", "/mazes/hard", {}, "").body.at("id") == "hard");

  store.evaluate_brain("b2");
  r = api.handle("GET", "/leaderboard", {{"maze", "easy"}, {"limit", "1"}}, "");
  CHECK(r.status == 200);
  CHECK(r.body.at("entries").size() == 1);
  CHECK(api.handle("GET", "/leaderboard", {{"maze", "easy"}, {"limit", "x"}}, "").status == 400);

  r = api.handle("POST", "/sessions", {}, R"({"brain_id":"b1","mode":"interactive","seed":4})");
  REQUIRE(r.status == 201);
  CHECK(r.body.at("candidates").size() == 9);
  const auto pick = r.body.at("candidates")[3].at("id").get<std::uint64_t>();
  r = api.handle("POST", "/sessions/s1/breed", {},
                 io::dump(io::Json{{"selections", {pick}}}));
  CHECK(r.status == 200);
  CHECK(r.body.at("generation") == 1);
  CHECK(api.handle("GET", "/sessions/s1", {}, "").body.at("generation") == 1);

  SUBCASE("errors map to statuses") {
    CHECK(api.handle("POST", "/brains", {}, "{").status == 400);
    CHECK(api.handle("POST", "/brains", {}, R"({"author":"a"})").status == 400);
    io::Json extra = create;
    extra["colour"] = "red";
    CHECK(api.handle("POST", "/brains", {}, io::dump(extra)).status == 400);
    CHECK(api.handle("DELETE", "/brains/b1", {}, "").status == 405);
    CHECK(api.handle("GET", "/nowhere", {}, "").status == 404);
    CHECK(api.handle("POST", "/sessions", {}, R"({"brain_id":"b1","mode":"chaos"})").status == 400);
    CHECK(api.handle("POST", "/sessions/s1/breed", {}, R"({"selections":[]})").status == 400);

    auto compiled = compiler::compile(anet);
    for (auto& conn : compiled.cppn.connections) {
      if (conn.tag == cppn::ConnectionTag::kOrbitWeight) conn.weight += 0.5;
    }
    io::Json bad = create;
    bad["cppn"] = io::cppn_to_json(compiled.cppn);
    bad["report"] = io::report_to_json(compiled.report);
    const auto resp = api.handle("POST", "/brains", {}, io::dump(bad));
    CHECK(resp.status == 422);
  }
}

TEST_CASE("http server answers over a socket") {
  Store store("", mazes(), ticking_clock());
  service::Api api(store);
  service::HttpServer server(api);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread t([&] { server.listen(); });
  httplib::Client client("127.0.0.1", port);
  httplib::Result res;
  for (int attempt = 0; attempt < 50 && !res; ++attempt) {
    res = client.Get("/mazes");
    if (!res) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(io::parse_json(res->body).at("mazes").size() == mazes().size());
  auto missing = client.Get("/brains/b5");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  server.stop();
  t.join();
}
