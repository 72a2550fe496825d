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

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "lc/common/error.h"
#include "lc/protocol/service.h"

namespace lc::protocol {

namespace rpc_code {
inline constexpr int kParseError = -32700;
inline constexpr int kInvalidRequest = -32600;
inline constexpr int kMethodNotFound = -32601;
inline constexpr int kInvalidParams = -32602;
inline constexpr int kInternalError = -32603;
inline constexpr int kLearnerNotFound = -32001;
inline constexpr int kBudgetExhausted = -32002;
inline constexpr int kEmptyAfterFiltering = -32003;
}  // namespace rpc_code

int rpc_code_for(ErrorCode code);

// JSON-RPC 2.0 front end over an LcService. Methods: initialize, ping,
// tools/list, tools/call.
class RpcHandler {
 public:
  explicit RpcHandler(LcService& service) : service_(service) {}

  // Returns nullopt for notifications and all-notification batches.
  std::optional<nlohmann::json> handle(const nlohmann::json& message);
  // Same over raw text; parse failures yield a -32700 response.
  std::optional<std::string> handle_text(std::string_view text);

 private:
  std::optional<nlohmann::json> handle_one(const nlohmann::json& request);
  nlohmann::json call_tool(const nlohmann::json& params);

  LcService& service_;
};

nlohmann::json rpc_error(const nlohmann::json& id, int code, std::string_view message,
                         const nlohmann::json& data = nullptr);

}  // namespace lc::protocol
