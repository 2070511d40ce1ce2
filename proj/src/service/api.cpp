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

#include "brainforge/service/api.hpp"

#include <algorithm>
#include <charconv>
#include <vector>

#include "httplib.h"

namespace brainforge::service {

using io::Json;

namespace {

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '/') {
      ++i;
      continue;
    }
    const std::size_t end = std::min(path.find('/', i), path.size());
    parts.push_back(path.substr(i, end - i));
    i = end;
  }
  return parts;
}

void require_fields(const Json& j, std::initializer_list<std::string_view> required,
                    std::initializer_list<std::string_view> optional = {}) {
  if (!j.is_object()) throw Error(ErrorCode::kSchema, "expected a JSON object", "$");
  for (auto key : required) {
    if (!j.contains(key)) throw Error(ErrorCode::kSchema, "missing field", std::string(key));
  }
  for (const auto& [key, value] : j.items()) {
    if (std::find(required.begin(), required.end(), key) == required.end() &&
        std::find(optional.begin(), optional.end(), key) == optional.end()) {
      throw Error(ErrorCode::kSchema, "unknown field", key);
    }
  }
}

std::string string_field(const Json& j, const char* key) {
  if (!j.at(key).is_string()) throw Error(ErrorCode::kSchema, "expected a string", key);
  return j.at(key).get<std::string>();
}

evo::SelectionKind mode_field(const Json& j, const char* key) {
  const auto mode = evo::parse_selection_kind(string_field(j, key));
  if (!mode) throw Error(ErrorCode::kSchema, "unknown selection mode", key);
  return *mode;
}

Json maze_view(const std::string& id, const sim::Maze& maze) {
  Json j;
  j["id"] = id;
  const Json body = io::maze_to_json(maze);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j;
}

Json session_view(const Session& s) {
  Json j;
  j["id"] = s.id;
  j["brain_id"] = s.brain_id;
  j["maze_id"] = s.maze_id;
  j["mode"] = evo::selection_kind_name(s.mode);
  j["generation"] = s.population.generation;
  Json candidates = Json::array();
  for (const auto& m : s.population.members) candidates.push_back(io::individual_to_json(m));
  j["candidates"] = std::move(candidates);
  j["parents"] = s.last_parents;
  j["archive"] = io::archive_to_json(s.archive);
  return j;
}

Response not_found(std::string_view path) {
  return {404, error_body(Error(ErrorCode::kNotFound, "no such endpoint", std::string(path)))};
}

Response method_not_allowed(std::string_view method) {
  return {405, {{"code", "method_not_allowed"}, {"message", "method not allowed"},
                {"detail", std::string(method)}}};
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kConflict: return 409;
    case ErrorCode::kRoundTrip:
    case ErrorCode::kStaleReport:
    case ErrorCode::kArity: return 422;
    case ErrorCode::kIo: return 500;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse:
    case ErrorCode::kSchema:
    case ErrorCode::kCycle: return 400;
  }
  return 500;
}

Json error_body(const Error& error) {
  return {{"code", error_code_name(error.code())}, {"message", error.what()},
          {"detail", error.detail()}};
}

Response Api::handle(std::string_view method, std::string_view path,
                     const std::map<std::string, std::string>& query, std::string_view body) {
  try {
    return route(method, path, query, body);
  } catch (const Error& e) {
    return {http_status(e.code()), error_body(e)};
  } catch (const nlohmann::json::exception& e) {
    return {400, error_body(Error(ErrorCode::kSchema, "malformed payload", e.what()))};
  }
}

Response Api::route(std::string_view method, std::string_view path,
                    const std::map<std::string, std::string>& query, std::string_view body) {
  const auto parts = split_path(path);
  const bool get = method == "GET";
  const bool post = method == "POST";
  const auto parse_body = [&] { return io::parse_json(body.empty() ? "{}" : body); };
  if (parts.empty()) return not_found(path);
  const std::string_view root = parts[0];

  if (root == "brains") {
    if (parts.size() == 1) {
      if (!post) return method_not_allowed(method);
      const Json j = parse_body();
      require_fields(j, {"author", "maze_id", "anet"}, {"parent_id", "cppn", "report"});
      NewBrain nb;
      nb.author = string_field(j, "author");
      nb.maze_id = string_field(j, "maze_id");
      if (j.contains("parent_id") && !j.at("parent_id").is_null()) {
        nb.parent_id = string_field(j, "parent_id");
      }
      nb.anet = io::annotated_from_json(j.at("anet"));
      if (j.contains("cppn")) nb.cppn = io::cppn_from_json(j.at("cppn"));
      if (j.contains("report")) nb.report = io::report_from_json(j.at("report"));
      return {201, record_to_json(store_.save_brain(nb))};
    }
    const std::string id(parts[1]);
    if (parts.size() == 2) {
      if (!get) return method_not_allowed(method);
      return {200, record_to_json(store_.get_brain(id))};
    }
    if (parts.size() == 3 && post) {
      if (parts[2] == "fork") {
        const Json j = parse_body();
        require_fields(j, {"author"});
        return {201, record_to_json(store_.fork_brain(id, string_field(j, "author")))};
      }
      if (parts[2] == "evaluate") {
        return {200, io::evaluation_to_json(store_.evaluate_brain(id))};
      }
      if (parts[2] == "edits") {
        return {200, record_to_json(store_.edit_brain(id, io::edit_from_json(parse_body())))};
      }
    }
    if (parts.size() == 3 && get) return method_not_allowed(method);
    return not_found(path);
  }

  if (root == "mazes") {
    if (!get) return method_not_allowed(method);
    if (parts.size() == 1) {
      Json list = Json::array();
      for (const auto& [id, maze] : store_.mazes()) list.push_back(maze_view(id, maze));
      return {200, {{"mazes", std::move(list)}}};
    }
    if (parts.size() == 2) {
      const std::string id(parts[1]);
      return {200, maze_view(id, store_.maze(id))};
    }
    return not_found(path);
  }

  if (root == "leaderboard" && parts.size() == 1) {
    if (!get) return method_not_allowed(method);
    auto maze_it = query.find("maze");
    if (maze_it == query.end()) throw Error(ErrorCode::kInvalidArgument, "missing query parameter", "maze");
    std::size_t limit = 10;
    if (auto it = query.find("limit"); it != query.end()) {
      const auto& s = it->second;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), limit);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::kInvalidArgument, "limit must be a non-negative integer", s);
      }
    }
    Json entries = Json::array();
    for (const auto& e : store_.leaderboard(maze_it->second, limit)) {
      entries.push_back({{"brain_id", e.brain_id}, {"author", e.author},
                         {"best_fitness", e.best_fitness}});
    }
    return {200, {{"maze", maze_it->second}, {"entries", std::move(entries)}}};
  }

  if (root == "sessions") {
    if (parts.size() == 1) {
      if (!post) return method_not_allowed(method);
      const Json j = parse_body();
      require_fields(j, {"brain_id", "mode"}, {"seed"});
      std::uint64_t seed = 0;
      if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) {
          throw Error(ErrorCode::kSchema, "expected a non-negative integer", "seed");
        }
        seed = j.at("seed").get<std::uint64_t>();
      }
      return {201, session_view(store_.create_session(string_field(j, "brain_id"),
                                                      mode_field(j, "mode"), seed))};
    }
    const std::string id(parts[1]);
    if (parts.size() == 2) {
      if (!get) return method_not_allowed(method);
      return {200, session_view(store_.get_session(id))};
    }
    if (parts.size() == 3 && parts[2] == "breed") {
      if (!post) return method_not_allowed(method);
      const Json j = parse_body();
      require_fields(j, {"selections"}, {"mode"});
      std::vector<evo::IndividualId> selections;
      if (!j.at("selections").is_array()) throw Error(ErrorCode::kSchema, "expected an array", "selections");
      for (const auto& s : j.at("selections")) {
        if (!s.is_number_unsigned()) throw Error(ErrorCode::kSchema, "expected candidate ids", "selections");
        selections.push_back(s.get<evo::IndividualId>());
      }
      std::optional<evo::SelectionKind> mode;
      if (j.contains("mode")) mode = mode_field(j, "mode");
      return {200, session_view(store_.breed(id, selections, mode))};
    }
    return not_found(path);
  }
  return not_found(path);
}

struct HttpServer::Impl {
  explicit Impl(Api& a) : api(a) {}
  Api& api;
  httplib::Server server;
};

HttpServer::HttpServer(Api& api) : impl_(std::make_unique<Impl>(api)) {
  const auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    const Response r = impl_->api.handle(req.method, req.path, query, req.body);
    res.status = r.status;
    res.set_content(io::dump(r.body), "application/json");
  };
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
  impl_->server.Put(".*", handler);
  impl_->server.Delete(".*", handler);
  impl_->server.Patch(".*", handler);
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::kIo, "cannot bind", host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace brainforge::service
