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

#include "brainforge/io/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "brainforge/error.hpp"

namespace brainforge::io {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::kSchema, message, path.empty() ? "$" : path);
}

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(path, "expected a finite number");
  return v;
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  return j.get<std::string>();
}

const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array");
  return j;
}

std::int64_t as_integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::uint64_t as_unsigned(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned()) schema_error(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

// An object whose keys must all be known; required keys must be present.
class Fields {
 public:
  Fields(const Json& j, std::string path, std::initializer_list<std::string_view> required,
         std::initializer_list<std::string_view> optional = {})
      : j_(j), path_(std::move(path)) {
    if (!j.is_object()) schema_error(path_, "expected an object");
    for (auto key : required) {
      if (!j.contains(key)) schema_error(join(path_, key), "missing field");
    }
    for (const auto& [key, value] : j.items()) {
      const bool known = std::find(required.begin(), required.end(), key) != required.end() ||
                         std::find(optional.begin(), optional.end(), key) != optional.end();
      if (!known) schema_error(join(path_, key), "unknown field");
    }
  }

  bool has(std::string_view key) const { return j_.contains(key) && !j_.at(std::string(key)).is_null(); }
  const Json& at(std::string_view key) const { return j_.at(std::string(key)); }
  std::string path(std::string_view key) const { return join(path_, key); }

  double number(std::string_view key) const { return as_number(at(key), path(key)); }
  std::string string(std::string_view key) const { return as_string(at(key), path(key)); }
  const Json& array(std::string_view key) const { return as_array(at(key), path(key)); }
  std::int64_t integer(std::string_view key) const { return as_integer(at(key), path(key)); }
  std::uint64_t unsigned_integer(std::string_view key) const {
    return as_unsigned(at(key), path(key));
  }
  bool boolean(std::string_view key) const {
    if (!at(key).is_boolean()) schema_error(path(key), "expected a boolean");
    return at(key).get<bool>();
  }

  void expect_schema(std::string_view schema) const {
    if (string("schema") != schema) {
      schema_error(path("schema"), "expected schema \"" + std::string(schema) + "\"");
    }
  }

 private:
  const Json& j_;
  std::string path_;
};

std::vector<std::string> string_list(const Json& j, const std::string& path) {
  std::vector<std::string> out;
  const Json& arr = as_array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(as_string(arr[i], index(path, i)));
  return out;
}

std::vector<double> number_tuple(const Json& j, const std::string& path, std::size_t n) {
  const Json& arr = as_array(j, path);
  if (arr.size() != n) schema_error(path, "expected " + std::to_string(n) + " numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(as_number(arr[i], index(path, i)));
  return out;
}

Json neuron_to_json(const ann::Neuron& n) {
  Json j;
  j["id"] = n.id;
  j["role"] = ann::role_name(n.role);
  j["x"] = n.position.x;
  j["y"] = n.position.y;
  return j;
}

ann::Neuron neuron_from_json(const Json& j, const std::string& path) {
  Fields f(j, path, {"id", "role", "x", "y"});
  ann::Neuron n;
  n.id = f.string("id");
  const auto role = ann::parse_role(f.string("role"));
  if (!role) schema_error(f.path("role"), "unknown role");
  n.role = *role;
  n.position = {f.number("x"), f.number("y")};
  return n;
}

std::vector<ann::Neuron> neurons_from_json(const Json& j, const std::string& path) {
  std::vector<ann::Neuron> out;
  const Json& arr = as_array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(neuron_from_json(arr[i], index(path, i)));
  return out;
}

Json neurons_to_json(const std::vector<ann::Neuron>& neurons) {
  Json arr = Json::array();
  for (const auto& n : neurons) arr.push_back(neuron_to_json(n));
  return arr;
}

void fill_network(Json& j, const ann::NetworkPhenotype& network) {
  j["neurons"] = neurons_to_json(network.neurons);
  Json conns = Json::array();
  for (const auto& c : network.connections) {
    conns.push_back({{"src", c.src}, {"dst", c.dst}, {"weight", c.weight}});
  }
  j["connections"] = std::move(conns);
  j["input_order"] = network.input_order;
  j["output_order"] = network.output_order;
}

ann::NetworkPhenotype read_network(const Fields& f) {
  ann::NetworkPhenotype net;
  net.neurons = neurons_from_json(f.at("neurons"), f.path("neurons"));
  const Json& conns = f.array("connections");
  for (std::size_t i = 0; i < conns.size(); ++i) {
    Fields c(conns[i], index(f.path("connections"), i), {"src", "dst", "weight"});
    net.connections.push_back({c.string("src"), c.string("dst"), c.number("weight")});
  }
  net.input_order = string_list(f.at("input_order"), f.path("input_order"));
  net.output_order = string_list(f.at("output_order"), f.path("output_order"));
  return net;
}

Json pose_to_json(const sim::Pose& p) { return Json::array({p.x, p.y, p.heading}); }

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, "malformed JSON", "byte " + std::to_string(e.byte));
  }
}

std::string dump(const Json& json) { return json.dump(); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open file", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write file", path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed", path);
}

Json network_to_json(const ann::NetworkPhenotype& network) {
  Json j;
  j["schema"] = "net/1";
  fill_network(j, network);
  return j;
}

ann::NetworkPhenotype network_from_json(const Json& json) {
  Fields f(json, "", {"schema", "neurons", "connections", "input_order", "output_order"});
  f.expect_schema("net/1");
  return read_network(f);
}

Json annotated_to_json(const compiler::AnnotatedNetwork& annotated) {
  Json j;
  j["schema"] = "anet/1";
  fill_network(j, annotated.phenotype);
  Json anns = Json::array();
  for (const auto& a : annotated.annotations) {
    Json entry;
    entry["kind"] = compiler::annotation_kind_name(a.kind);
    Json params = Json::object();
    if (a.kind == compiler::AnnotationKind::kRepeat) {
      params["dx"] = a.offset.x;
      params["dy"] = a.offset.y;
      params["count"] = a.count;
    }
    entry["params"] = std::move(params);
    Json members = Json::array();
    for (const auto& m : a.members) members.push_back(Json::array({m.src, m.dst}));
    entry["members"] = std::move(members);
    anns.push_back(std::move(entry));
  }
  j["annotations"] = std::move(anns);
  return j;
}

compiler::AnnotatedNetwork annotated_from_json(const Json& json) {
  Fields f(json, "",
           {"schema", "neurons", "connections", "input_order", "output_order", "annotations"});
  f.expect_schema("anet/1");
  compiler::AnnotatedNetwork out;
  out.phenotype = read_network(f);
  const Json& anns = f.array("annotations");
  for (std::size_t i = 0; i < anns.size(); ++i) {
    const std::string path = index(f.path("annotations"), i);
    Fields a(anns[i], path, {"kind", "params", "members"});
    compiler::Annotation ann;
    const auto kind = compiler::parse_annotation_kind(a.string("kind"));
    if (!kind) schema_error(a.path("kind"), "unknown annotation kind");
    ann.kind = *kind;
    if (ann.kind == compiler::AnnotationKind::kRepeat) {
      Fields p(a.at("params"), a.path("params"), {"dx", "dy", "count"});
      ann.offset = {p.number("dx"), p.number("dy")};
      ann.count = static_cast<int>(p.integer("count"));
    } else {
      Fields p(a.at("params"), a.path("params"), {});
    }
    const Json& members = a.array("members");
    for (std::size_t m = 0; m < members.size(); ++m) {
      const auto pair = string_list(members[m], index(a.path("members"), m));
      if (pair.size() != 2) schema_error(index(a.path("members"), m), "expected [src, dst]");
      ann.members.push_back({pair[0], pair[1]});
    }
    out.annotations.push_back(std::move(ann));
  }
  return out;
}

Json cppn_to_json(const cppn::Cppn& cppn) {
  Json j;
  j["schema"] = "cppn/1";
  Json nodes = Json::array();
  for (const auto& n : cppn.nodes) {
    nodes.push_back({{"id", n.id},
                     {"function", cppn::function_name(n.function)},
                     {"tag", cppn::node_tag_name(n.tag)}});
  }
  j["nodes"] = std::move(nodes);
  Json conns = Json::array();
  for (const auto& c : cppn.connections) {
    conns.push_back({{"src", c.src},
                     {"dst", c.dst},
                     {"weight", c.weight},
                     {"tag", cppn::connection_tag_name(c.tag)}});
  }
  j["connections"] = std::move(conns);
  return j;
}

cppn::Cppn cppn_from_json(const Json& json) {
  Fields f(json, "", {"schema", "nodes", "connections"});
  f.expect_schema("cppn/1");
  cppn::Cppn out;
  const Json& nodes = f.array("nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Fields n(nodes[i], index(f.path("nodes"), i), {"id", "function", "tag"});
    const auto fn = cppn::parse_function(n.string("function"));
    if (!fn) schema_error(n.path("function"), "unknown function");
    const auto tag = cppn::parse_node_tag(n.string("tag"));
    if (!tag) schema_error(n.path("tag"), "unknown node tag");
    out.nodes.push_back({n.string("id"), *fn, *tag});
  }
  const Json& conns = f.array("connections");
  for (std::size_t i = 0; i < conns.size(); ++i) {
    Fields c(conns[i], index(f.path("connections"), i), {"src", "dst", "weight", "tag"});
    const auto tag = cppn::parse_connection_tag(c.string("tag"));
    if (!tag) schema_error(c.path("tag"), "unknown connection tag");
    out.connections.push_back({c.string("src"), c.string("dst"), c.number("weight"), *tag});
  }
  cppn::check_cppn(out);
  return out;
}

Json substrate_to_json(const substrate::Substrate& substrate) {
  Json j;
  j["neurons"] = neurons_to_json(substrate.neurons);
  j["input_order"] = substrate.input_order;
  j["output_order"] = substrate.output_order;
  return j;
}

substrate::Substrate substrate_from_json(const Json& json) {
  Fields f(json, "substrate", {"neurons", "input_order", "output_order"});
  substrate::Substrate s;
  s.neurons = neurons_from_json(f.at("neurons"), f.path("neurons"));
  s.input_order = string_list(f.at("input_order"), f.path("input_order"));
  s.output_order = string_list(f.at("output_order"), f.path("output_order"));
  return s;
}

Json report_to_json(const compiler::CompilationReport& report) {
  Json j;
  j["schema"] = "cppnrpt/1";
  j["sharpness"] = report.sharpness;
  j["substrate"] = substrate_to_json(report.substrate);
  Json detectors = Json::array();
  for (const auto& d : report.detectors) {
    detectors.push_back({{"src", d.connection.src},
                         {"dst", d.connection.dst},
                         {"geometry", d.geometry},
                         {"detector", d.detector},
                         {"orbit", d.orbit}});
  }
  j["detectors"] = std::move(detectors);
  Json orbits = Json::array();
  for (const auto& o : report.orbits) {
    orbits.push_back({{"id", o.id}, {"sum_node", o.sum_node}, {"detectors", o.detectors}});
  }
  j["orbits"] = std::move(orbits);
  j["warnings"] = report.warnings;
  return j;
}

compiler::CompilationReport report_from_json(const Json& json) {
  Fields f(json, "", {"schema", "sharpness", "substrate", "detectors", "orbits", "warnings"});
  f.expect_schema("cppnrpt/1");
  compiler::CompilationReport r;
  r.sharpness = f.number("sharpness");
  r.substrate = substrate_from_json(f.at("substrate"));
  const Json& detectors = f.array("detectors");
  for (std::size_t i = 0; i < detectors.size(); ++i) {
    Fields d(detectors[i], index(f.path("detectors"), i),
             {"src", "dst", "geometry", "detector", "orbit"});
    compiler::DetectorEntry e;
    e.connection = {d.string("src"), d.string("dst")};
    const auto geometry = string_list(d.at("geometry"), d.path("geometry"));
    if (geometry.size() != 4) schema_error(d.path("geometry"), "expected 4 node ids");
    std::copy(geometry.begin(), geometry.end(), e.geometry.begin());
    e.detector = d.string("detector");
    e.orbit = d.string("orbit");
    r.detectors.push_back(std::move(e));
  }
  const Json& orbits = f.array("orbits");
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    Fields o(orbits[i], index(f.path("orbits"), i), {"id", "sum_node", "detectors"});
    r.orbits.push_back({o.string("id"), o.string("sum_node"),
                        string_list(o.at("detectors"), o.path("detectors"))});
  }
  r.warnings = string_list(f.at("warnings"), f.path("warnings"));
  return r;
}

Json edit_to_json(const ann::NetworkEdit& edit) {
  return std::visit(
      [](const auto& e) -> Json {
        using T = std::decay_t<decltype(e)>;
        Json j;
        if constexpr (std::is_same_v<T, ann::edit::AddNeuron>) {
          j["op"] = "AddNeuron";
          j["role"] = ann::role_name(e.role);
          j["x"] = e.position.x;
          j["y"] = e.position.y;
          if (e.id) j["id"] = *e.id;
        } else if constexpr (std::is_same_v<T, ann::edit::RemoveNeuron>) {
          j["op"] = "RemoveNeuron";
          j["id"] = e.id;
        } else if constexpr (std::is_same_v<T, ann::edit::MoveNeuron>) {
          j["op"] = "MoveNeuron";
          j["id"] = e.id;
          j["x"] = e.position.x;
          j["y"] = e.position.y;
        } else if constexpr (std::is_same_v<T, ann::edit::AddConnection>) {
          j["op"] = "AddConnection";
          j["src"] = e.src;
          j["dst"] = e.dst;
          j["weight"] = e.weight;
        } else if constexpr (std::is_same_v<T, ann::edit::RemoveConnection>) {
          j["op"] = "RemoveConnection";
          j["src"] = e.src;
          j["dst"] = e.dst;
        } else {
          j["op"] = "SetWeight";
          j["src"] = e.src;
          j["dst"] = e.dst;
          j["weight"] = e.weight;
        }
        return j;
      },
      edit);
}

ann::NetworkEdit edit_from_json(const Json& json) {
  if (!json.is_object() || !json.contains("op")) schema_error("op", "missing field");
  const std::string op = as_string(json.at("op"), "op");
  if (op == "AddNeuron") {
    Fields f(json, "", {"op", "role", "x", "y"}, {"id"});
    const auto role = ann::parse_role(f.string("role"));
    if (!role) schema_error(f.path("role"), "unknown role");
    ann::edit::AddNeuron e{*role, {f.number("x"), f.number("y")}, std::nullopt};
    if (f.has("id")) e.id = f.string("id");
    return e;
  }
  if (op == "RemoveNeuron") {
    Fields f(json, "", {"op", "id"});
    return ann::edit::RemoveNeuron{f.string("id")};
  }
  if (op == "MoveNeuron") {
    Fields f(json, "", {"op", "id", "x", "y"});
    return ann::edit::MoveNeuron{f.string("id"), {f.number("x"), f.number("y")}};
  }
  if (op == "AddConnection") {
    Fields f(json, "", {"op", "src", "dst", "weight"});
    return ann::edit::AddConnection{f.string("src"), f.string("dst"), f.number("weight")};
  }
  if (op == "RemoveConnection") {
    Fields f(json, "", {"op", "src", "dst"});
    return ann::edit::RemoveConnection{f.string("src"), f.string("dst")};
  }
  if (op == "SetWeight") {
    Fields f(json, "", {"op", "src", "dst", "weight"});
    return ann::edit::SetWeight{f.string("src"), f.string("dst"), f.number("weight")};
  }
  schema_error("op", "unknown edit op \"" + op + "\"");
}

Json evaluation_to_json(const sim::EvaluationResult& result) {
  Json j;
  j["fitness"] = result.fitness;
  j["behavior"] = {{"x", result.behavior.x}, {"y", result.behavior.y}};
  Json traj = Json::array();
  for (const auto& p : result.trajectory) traj.push_back(pose_to_json(p));
  j["trajectory"] = std::move(traj);
  j["goal_reached"] = result.goal_reached;
  j["steps_used"] = result.steps_used;
  return j;
}

sim::EvaluationResult evaluation_from_json(const Json& json) {
  Fields f(json, "eval", {"fitness", "behavior", "trajectory", "goal_reached", "steps_used"});
  sim::EvaluationResult r;
  r.fitness = f.number("fitness");
  Fields b(f.at("behavior"), f.path("behavior"), {"x", "y"});
  r.behavior = {b.number("x"), b.number("y")};
  const Json& traj = f.array("trajectory");
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto p = number_tuple(traj[i], index(f.path("trajectory"), i), 3);
    r.trajectory.push_back({p[0], p[1], p[2]});
  }
  r.goal_reached = f.boolean("goal_reached");
  r.steps_used = static_cast<int>(f.integer("steps_used"));
  return r;
}

Json archive_to_json(const evo::NoveltyArchive& archive) {
  Json j;
  Json points = Json::array();
  for (const auto& p : archive.points) points.push_back(Json::array({p.x, p.y}));
  j["points"] = std::move(points);
  j["add_threshold"] = archive.add_threshold;
  j["stale_generations"] = archive.stale_generations;
  return j;
}

evo::NoveltyArchive archive_from_json(const Json& json) {
  Fields f(json, "archive", {"points", "add_threshold", "stale_generations"});
  evo::NoveltyArchive a;
  const Json& points = f.array("points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = number_tuple(points[i], index(f.path("points"), i), 2);
    a.points.push_back({p[0], p[1]});
  }
  a.add_threshold = f.number("add_threshold");
  if (!(a.add_threshold > 0.0)) schema_error(f.path("add_threshold"), "must be positive");
  a.stale_generations = static_cast<int>(f.integer("stale_generations"));
  return a;
}

Json individual_to_json(const evo::Individual& individual) {
  Json j;
  j["id"] = individual.id;
  j["parent"] = individual.parent ? Json(*individual.parent) : Json(nullptr);
  j["genome"] = cppn_to_json(individual.genome);
  if (individual.report) j["report"] = report_to_json(*individual.report);
  j["substrate"] = substrate_to_json(individual.substrate);
  j["eval"] = individual.eval ? evaluation_to_json(*individual.eval) : Json(nullptr);
  return j;
}

evo::Individual individual_from_json(const Json& json) {
  Fields f(json, "individual", {"id", "parent", "genome", "substrate", "eval"}, {"report"});
  evo::Individual ind;
  ind.id = f.unsigned_integer("id");
  if (f.has("parent")) ind.parent = f.unsigned_integer("parent");
  ind.genome = cppn_from_json(f.at("genome"));
  if (f.has("report")) ind.report = report_from_json(f.at("report"));
  ind.substrate = substrate_from_json(f.at("substrate"));
  if (f.has("eval")) ind.eval = evaluation_from_json(f.at("eval"));
  return ind;
}

Json population_to_json(const evo::Population& population) {
  Json j;
  j["schema"] = "pop/1";
  j["generation"] = population.generation;
  j["next_id"] = population.next_id;
  Json members = Json::array();
  for (const auto& m : population.members) members.push_back(individual_to_json(m));
  j["members"] = std::move(members);
  return j;
}

evo::Population population_from_json(const Json& json) {
  Fields f(json, "", {"schema", "generation", "next_id", "members"});
  f.expect_schema("pop/1");
  evo::Population p;
  p.generation = static_cast<int>(f.integer("generation"));
  p.next_id = f.unsigned_integer("next_id");
  for (const auto& m : f.array("members")) p.members.push_back(individual_from_json(m));
  return p;
}

Json maze_to_json(const sim::Maze& maze) {
  Json j;
  const auto& s = maze.start();
  const auto& g = maze.goal();
  j["start"] = {{"x", s.x}, {"y", s.y}, {"heading", s.heading}};
  j["goal"] = {{"x", g.x}, {"y", g.y}, {"radius", g.radius}};
  Json walls = Json::array();
  for (std::size_t i = 0; i < maze.interior_wall_count(); ++i) {
    const auto& w = maze.walls()[i];
    walls.push_back(Json::array({w.a.x, w.a.y, w.b.x, w.b.y}));
  }
  j["walls"] = std::move(walls);
  return j;
}

Json bundle_to_json(const BrainBundle& bundle) {
  Json j;
  j["schema"] = "brain/1";
  j["anet"] = annotated_to_json(bundle.anet);
  j["cppn"] = cppn_to_json(bundle.cppn);
  j["report"] = report_to_json(bundle.report);
  return j;
}

BrainBundle bundle_from_json(const Json& json) {
  Fields f(json, "", {"schema", "anet", "cppn", "report"});
  f.expect_schema("brain/1");
  return {annotated_from_json(f.at("anet")), cppn_from_json(f.at("cppn")),
          report_from_json(f.at("report"))};
}

}  // namespace brainforge::io
