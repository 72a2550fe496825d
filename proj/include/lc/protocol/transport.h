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

#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "lc/protocol/rpc.h"

namespace lc::protocol {

// Newline-delimited JSON-RPC: one message per input line, one response per
// output line. Returns at end of input.
void serve_stdio(RpcHandler& handler, std::istream& in, std::ostream& out);

// HTTP transport: POST /rpc with a JSON-RPC body. Notifications get 204.
// `port` 0 picks a free port; `on_listening` receives the bound port before
// the server starts accepting. Blocks until stop_http() or a signal.
void serve_http(RpcHandler& handler, const std::string& host, int port,
                const std::function<void(int)>& on_listening = {});
void stop_http();

}  // namespace lc::protocol
