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

// Headless entry points: compile, roundtrip, eval, evolve, serve, audit.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "brainforge/compiler/compiler.hpp"
#include "brainforge/error.hpp"
#include "brainforge/evo/engine.hpp"
#include "brainforge/io/json_io.hpp"
#include "brainforge/service/api.hpp"
#include "brainforge/service/store.hpp"
#include "brainforge/substrate/decoder.hpp"

namespace fs = std::filesystem;
using namespace brainforge;

namespace {

io::Json read_json(const std::string& path) { return io::parse_json(io::read_text_file(path)); }

// A maze argument is either a file or the name of a bundled maze.
sim::Maze resolve_maze(const std::string& arg, const std::string& maze_dir) {
  if (fs::is_regular_file(arg)) return sim::load_maze_file(arg);
  const fs::path bundled = fs::path(maze_dir) / (arg + ".maze");
  if (fs::is_regular_file(bundled)) return sim::load_maze_file(bundled.string());
  throw Error(ErrorCode::kNotFound, "unknown maze", arg);
}

std::string schema_of(const io::Json& j) {
  return j.is_object() && j.contains("schema") && j["schema"].is_string()
             ? j["schema"].get<std::string>()
             : "";
}

// brain/1 files are taken as-is; anet/1 files are compiled first.
io::BrainBundle load_brain(const std::string& path) {
  const io::Json j = read_json(path);
  if (schema_of(j) == "anet/1") {
    auto anet = io::annotated_from_json(j);
    auto compiled = compiler::compile(anet);
    return {std::move(anet), std::move(compiled.cppn), std::move(compiled.report)};
  }
  return io::bundle_from_json(j);
}

int run_compile(const std::string& anet_path, const std::string& out_path) {
  const auto anet = io::annotated_from_json(read_json(anet_path));
  auto compiled = compiler::compile(anet);
  const auto& r = compiled.report;
  io::write_text_file(out_path, io::dump(io::bundle_to_json({anet, compiled.cppn, r})) + "\n");
  std::cout << "nodes " << compiled.cppn.nodes.size() << " connections "
            << compiled.cppn.connections.size() << " orbits " << r.orbits.size()
            << " sharpness " << r.sharpness << "\n";
  for (const auto& w : r.warnings) std::cout << "warning: " << w << "\n";
  return 0;
}

int run_roundtrip(const std::string& path) {
  const auto brain = load_brain(path);
  const auto expected = compiler::expand_annotations(brain.anet).phenotype;
  const auto diff = compiler::round_trip_diff(brain.cppn, expected);
  std::cout << "max_weight_error " << diff.max_weight_error << " missing " << diff.missing.size()
            << " spurious " << diff.spurious.size() << "\n";
  for (const auto& k : diff.missing) std::cout << "missing " << k.src << "->" << k.dst << "\n";
  for (const auto& k : diff.spurious) std::cout << "spurious " << k.src << "->" << k.dst << "\n";
  const bool ok = diff.matches(compiler::kRoundTripTolerance);
  std::cout << (ok ? "ok" : "mismatch") << "\n";
  return ok ? 0 : 1;
}

int run_eval(const std::string& brain_path, const std::string& maze_arg,
             const std::string& maze_dir, bool trajectory) {
  const io::Json j = read_json(brain_path);
  ann::NetworkPhenotype net;
  if (schema_of(j) == "net/1") {
    net = io::network_from_json(j);
  } else {
    const auto brain = load_brain(brain_path);
    net = substrate::decode(brain.cppn, brain.report.substrate);
  }
  const auto result = sim::evaluate(net, resolve_maze(maze_arg, maze_dir));
  io::Json out = io::evaluation_to_json(result);
  if (!trajectory) out.erase("trajectory");
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct EvolveArgs {
  std::string maze;
  std::string mode = "objective";
  int generations = 50;
  std::uint64_t seed = 0;
  int pop = 64;
  std::string log;
  std::string out;
  std::string anet;
};

int run_evolve(const EvolveArgs& a, const std::string& maze_dir) {
  const auto kind = evo::parse_selection_kind(a.mode);
  if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown mode", a.mode);
  evo::EvolutionConfig config;
  config.seed = a.seed;
  config.pop_size = a.pop;
  std::optional<evo::Individual> seed;
  if (!a.anet.empty()) {
    auto compiled = compiler::compile(io::annotated_from_json(read_json(a.anet)));
    evo::Individual ind;
    ind.genome = std::move(compiled.cppn);
    ind.substrate = compiled.report.substrate;
    ind.report = std::move(compiled.report);
    seed = std::move(ind);
  }
  evo::EvolutionRun run(resolve_maze(a.maze, maze_dir), *kind, config, seed);
  std::ofstream log;
  if (!a.log.empty()) {
    log.open(a.log, std::ios::binary | std::ios::trunc);
    if (!log) throw Error(ErrorCode::kIo, "cannot write log", a.log);
  }
  const auto emit = [&] {
    const std::string line = run.log_line();
    if (log.is_open()) log << line << '\n';
    std::cout << line << '\n';
  };
  emit();
  for (int g = 0; g < a.generations; ++g) {
    run.advance();
    emit();
  }
  if (!a.out.empty()) {
    io::write_text_file(a.out, io::dump(io::population_to_json(run.population())) + "\n");
  }
  return 0;
}

service::HttpServer* g_server = nullptr;

int run_serve(int port, const std::string& host, const std::string& store_dir,
              const std::string& maze_dir) {
  service::Store store(store_dir, service::Store::load_maze_dir(maze_dir));
  service::Api api(store);
  service::HttpServer server(api);
  const int bound = server.bind(host, port);
  std::cout << "listening on " << host << ":" << bound << std::endl;
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  server.listen();
  g_server = nullptr;
  return 0;
}

int run_audit(const std::string& store_dir, const std::string& maze_dir) {
  if (!fs::is_regular_file(fs::path(store_dir) / "events.jsonl")) {
    throw Error(ErrorCode::kNotFound, "no event log in store", store_dir);
  }
  const auto report = service::audit_store(store_dir, service::Store::load_maze_dir(maze_dir));
  std::cout << "events " << report.events << " brains " << report.brains << " failures "
            << report.failures.size() << "\n";
  for (const auto& f : report.failures) std::cout << "FAIL " << f << "\n";
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"brainforge: compile, evaluate and evolve maze-navigation brains"};
  app.require_subcommand(1);
  std::string maze_dir = BRAINFORGE_MAZE_DIR;
  app.add_option("--mazes", maze_dir, "directory of bundled .maze files");

  std::string anet_path, out_path, brain_path, maze_arg, store_dir, host = "127.0.0.1";
  bool trajectory = false;
  int port = 8080;
  EvolveArgs evolve;

  auto* compile = app.add_subcommand("compile", "compile an anet/1 file into a brain/1 bundle");
  compile->add_option("--anet", anet_path)->required();
  compile->add_option("--out", out_path)->required();

  auto* roundtrip = app.add_subcommand("roundtrip", "check decode(compile(anet)) against anet");
  roundtrip->add_option("--anet", anet_path, "anet/1 or brain/1 file")->required();

  auto* eval = app.add_subcommand("eval", "run a brain in a maze");
  eval->add_option("--brain", brain_path, "brain/1, anet/1 or net/1 file")->required();
  eval->add_option("--maze", maze_arg, "maze file or bundled maze name")->required();
  eval->add_flag("--trajectory", trajectory, "include the per-step poses");

  auto* evo_cmd = app.add_subcommand("evolve", "headless evolution run");
  evo_cmd->add_option("--maze", evolve.maze)->required();
  evo_cmd->add_option("--mode", evolve.mode)->check(CLI::IsMember({"objective", "novelty"}));
  evo_cmd->add_option("--generations", evolve.generations)->check(CLI::NonNegativeNumber);
  evo_cmd->add_option("--seed", evolve.seed);
  evo_cmd->add_option("--pop", evolve.pop)->check(CLI::PositiveNumber);
  evo_cmd->add_option("--log", evolve.log, "per-generation run log");
  evo_cmd->add_option("--out", evolve.out, "final population (pop/1)");
  evo_cmd->add_option("--anet", evolve.anet, "seed the run with a compiled anet/1 design");

  auto* serve = app.add_subcommand("serve", "serve the workbench HTTP API");
  serve->add_option("--port", port);
  serve->add_option("--host", host);
  serve->add_option("--store", store_dir)->required();

  auto* audit = app.add_subcommand("audit", "replay a store and re-verify every brain");
  audit->add_option("--store", store_dir)->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*compile) return run_compile(anet_path, out_path);
    if (*roundtrip) return run_roundtrip(anet_path);
    if (*eval) return run_eval(brain_path, maze_arg, maze_dir, trajectory);
    if (*evo_cmd) return run_evolve(evolve, maze_dir);
    if (*serve) return run_serve(port, host, store_dir, maze_dir);
    if (*audit) return run_audit(store_dir, maze_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << error_code_name(e.code()) << ": " << e.what();
    if (!e.detail().empty()) std::cerr << " (" << e.detail() << ")";
    std::cerr << "\n";
    return 2;
  }
  return 0;
}
