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

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "brainforge/error.hpp"
#include "brainforge/io/json_io.hpp"
#include "brainforge/service/store.hpp"

namespace brainforge::service {

struct Response {
  int status = 200;
  io::Json body;
};

int http_status(ErrorCode code);
// {"code","message","detail"}
io::Json error_body(const Error& error);

// Transport-free request router. Every endpoint answers JSON; failures use
// error_body with the matching status.
//
//   POST /brains                  {author, maze_id, [parent_id], anet, [cppn, report]}
//   GET  /brains/{id}
//   POST /brains/{id}/fork        {author}
//   POST /brains/{id}/evaluate
//   POST /brains/{id}/edits       NetworkEdit
//   GET  /mazes, GET /mazes/{id}
//   GET  /leaderboard?maze={id}&limit=N
//   POST /sessions                {brain_id, mode, [seed]}
//   POST /sessions/{id}/breed     {selections, [mode]}
//   GET  /sessions/{id}
class Api {
 public:
  explicit Api(Store& store) : store_(store) {}

  Response handle(std::string_view method, std::string_view path,
                  const std::map<std::string, std::string>& query, std::string_view body);

 private:
  Response route(std::string_view method, std::string_view path,
                 const std::map<std::string, std::string>& query, std::string_view body);

  Store& store_;
};

// Binds an Api to a cpp-httplib server.
class HttpServer {
 public:
  explicit HttpServer(Api& api);
  ~HttpServer();

  // Port 0 picks a free port. Returns the bound port; throws Error(kIo).
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace brainforge::service
