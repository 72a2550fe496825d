// Copyright 2026 The Learning Context Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lc/protocol/transport.h"

#include <atomic>
#include <istream>
#include <ostream>

#include <httplib.h>

#include "lc/common/error.h"

namespace lc::protocol {

namespace {
std::atomic<httplib::Server*> g_server{nullptr};
}  // namespace

void serve_stdio(RpcHandler& handler, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (auto response = handler.handle_text(line)) {
      out << *response << '\n';
      out.flush();
    }
  }
}

void serve_http(RpcHandler& handler, const std::string& host, int port,
                const std::function<void(int)>& on_listening) {
  httplib::Server server;
  server.Post("/rpc", [&](const httplib::Request& req, httplib::Response& res) {
    if (auto response = handler.handle_text(req.body)) {
      res.set_content(*response, "application/json");
    } else {
      res.status = 204;
    }
  });
  const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::kStorageFailure, "cannot bind " + host + ":" + std::to_string(port));
  g_server.store(&server);
  if (on_listening) on_listening(bound);
  server.listen_after_bind();
  g_server.store(nullptr);
}

void stop_http() {
  if (auto* s = g_server.load()) s->stop();
}

}  // namespace lc::protocol
