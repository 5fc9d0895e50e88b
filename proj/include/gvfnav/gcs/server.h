// Copyright 2026 The gvfnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP and WebSocket front end of the ground-control service.
//
//   GET    /health
//   POST   /sessions                 body: scenario JSON
//   GET    /sessions
//   GET    /sessions/{id}
//   DELETE /sessions/{id}
//   GET    /sessions/{id}/snapshot
//   POST   /sessions/{id}/edits      body: edit or array of edits
//   GET    /sessions/{id}/edits      applied edit log
//   POST   /sessions/{id}/step?n=    steps a session by hand
//   GET    /sessions/{id}/log.csv
//   GET    /sessions/{id}/field?w=&bbox=xmin,ymin,xmax,ymax&res=nx,ny
//   WS     /sessions/{id}/stream     snapshot, then records; edits and
//                                    field requests in
//
// Message schemas are described in docs/protocol.md.

#ifndef GVFNAV_GCS_SERVER_H_
#define GVFNAV_GCS_SERVER_H_

#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "gvfnav/gcs/session.h"

namespace gvfnav::gcs {

struct HttpRequest {
  std::string method;  // "GET", "POST", ...
  std::string target;  // path with optional query
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Splits "a/b?x=1&y=2" into the path and percent-decoded query values.
std::string SplitTarget(const std::string& target,
                        std::map<std::string, std::string>* query);
std::string PercentDecode(std::string_view text);

// HTTP status for an exception: 400 for invalid input, 404 not found,
// 409 state conflicts, 500 otherwise.
int StatusFor(const std::exception& error);

// Handles one HTTP request (everything except the WebSocket upgrade).
class Router {
 public:
  Router(SessionManager& sessions, std::string scenario_base_dir,
         bool start_runners = true);

  HttpResponse Handle(const HttpRequest& request);

  // Handles one incoming WebSocket text frame for `session` and returns the
  // reply for the sender (ack, field or error).
  nlohmann::json HandleStreamMessage(Session& session, const std::string& text);

  SessionManager& sessions() { return sessions_; }

 private:
  HttpResponse HandleSession(const std::string& method,
                             const std::string& id, const std::string& rest,
                             const std::map<std::string, std::string>& query,
                             const std::string& body);

  SessionManager& sessions_;
  std::string base_dir_;
  bool start_runners_;
};

struct ServerOptions {
  std::string address = "127.0.0.1";
  // 0 picks a free port; see Server::port().
  std::uint16_t port = 8080;
  int threads = 2;
  std::string scenario_base_dir = ".";
  bool start_runners = true;
};

class Server {
 public:
  Server(SessionManager& sessions, ServerOptions options);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts the I/O threads. ConfigurationError when binding fails.
  void Start();
  std::uint16_t port() const;
  void Stop();
  // Blocks until Stop() is called from another thread or a signal handler.
  void Wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gvfnav::gcs

#endif  // GVFNAV_GCS_SERVER_H_
