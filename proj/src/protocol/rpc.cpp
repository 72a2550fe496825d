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

#include "lc/protocol/rpc.h"

namespace lc::protocol {

using nlohmann::json;

namespace {

json tool_result(const json& structured) {
  return {{"content", json::array({{{"type", "text"}, {"text", structured.dump()}}})},
          {"structuredContent", structured},
          {"isError", false}};
}

json success(const json& id, json result) {
  return {{"jsonrpc", "2.0"}, {"id", id}, {"result", std::move(result)}};
}

bool valid_id(const json& id) { return id.is_string() || id.is_number() || id.is_null(); }

}  // namespace

int rpc_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kLearnerNotFound: return rpc_code::kLearnerNotFound;
    case ErrorCode::kBudgetExhausted: return rpc_code::kBudgetExhausted;
    case ErrorCode::kEmptyAfterFiltering: return rpc_code::kEmptyAfterFiltering;
    case ErrorCode::kStorageFailure:
    case ErrorCode::kPostMergeInvalid: return rpc_code::kInternalError;
    default: return rpc_code::kInvalidParams;
  }
}

json rpc_error(const json& id, int code, std::string_view message, const json& data) {
  json error = {{"code", code}, {"message", message}};
  if (!data.is_null()) error["data"] = data;
  return {{"jsonrpc", "2.0"}, {"id", id}, {"error", std::move(error)}};
}

std::optional<json> RpcHandler::handle(const json& message) {
  if (message.is_array()) {
    if (message.empty()) return rpc_error(nullptr, rpc_code::kInvalidRequest, "empty batch");
    json out = json::array();
    for (const auto& m : message) {
      if (auto r = handle_one(m)) out.push_back(std::move(*r));
    }
    if (out.empty()) return std::nullopt;
    return out;
  }
  return handle_one(message);
}

std::optional<std::string> RpcHandler::handle_text(std::string_view text) {
  json message;
  try {
    message = json::parse(text);
  } catch (const json::exception& e) {
    return rpc_error(nullptr, rpc_code::kParseError, "parse error", e.what()).dump();
  }
  auto r = handle(message);
  if (!r) return std::nullopt;
  return r->dump(-1, ' ', false, json::error_handler_t::replace);
}

std::optional<json> RpcHandler::handle_one(const json& request) {
  if (!request.is_object() || request.value("jsonrpc", json()) != "2.0" ||
      !request.contains("method") || !request.at("method").is_string() ||
      (request.contains("id") && !valid_id(request.at("id"))) ||
      (request.contains("params") && !request.at("params").is_object() &&
       !request.at("params").is_array())) {
    const json id = request.is_object() && request.contains("id") && valid_id(request.at("id"))
                        ? request.at("id")
                        : json();
    return rpc_error(id, rpc_code::kInvalidRequest, "invalid request");
  }
  const bool notification = !request.contains("id");
  const json id = notification ? json() : request.at("id");
  const auto method = request.at("method").get<std::string>();
  const json params = request.value("params", json::object());

  json response;
  try {
    if (method == "tools/list") {
      json tools = json::array();
      for (const auto& t : tool_descriptors()) tools.push_back(to_json(t));
      response = success(id, {{"tools", tools}});
    } else if (method == "tools/call") {
      response = success(id, call_tool(params));
    } else if (method == "initialize") {
      response = success(id, {{"protocolVersion", "2024-11-05"},
                              {"capabilities", {{"tools", json::object()}}},
                              {"serverInfo", {{"name", "lc"}, {"version", "1.0.0"}}}});
    } else if (method == "ping") {
      response = success(id, json::object());
    } else {
      response = rpc_error(id, rpc_code::kMethodNotFound, "method not found: " + method);
    }
  } catch (const Error& e) {
    response = rpc_error(id, rpc_code_for(e.code()), e.what(),
                         {{"error", to_string(e.code())}});
  } catch (const json::exception& e) {
    response = rpc_error(id, rpc_code::kInvalidParams, e.what());
  } catch (const std::exception& e) {
    response = rpc_error(id, rpc_code::kInternalError, e.what());
  }
  if (notification) return std::nullopt;
  return response;
}

json RpcHandler::call_tool(const json& params) {
  if (!params.is_object() || !params.contains("name") || !params.at("name").is_string()) {
    throw Error(ErrorCode::kInvalidArgument, "tools/call needs a tool name");
  }
  const auto name = params.at("name").get<std::string>();
  const json args = params.value("arguments", json::object());
  if (!args.is_object()) throw Error(ErrorCode::kInvalidArgument, "arguments must be an object");

  if (name == "get_context_snapshot") {
    return tool_result(to_json(service_.get_context_snapshot(snapshot_request_from_json(args))));
  }
  if (name == "push_evidence") {
    if (!args.contains("learner_id") || !args.at("learner_id").is_string() ||
        !args.contains("events") || !args.at("events").is_array()) {
      throw Error(ErrorCode::kInvalidArgument, "push_evidence needs learner_id and events");
    }
    const auto events = args.at("events").get<std::vector<json>>();
    return tool_result(to_json(service_.push_evidence(args.at("learner_id").get<std::string>(),
                                                      events, args.value("actor", std::string("lc")))));
  }
  if (name == "probe_fidelity") {
    return tool_result(to_json(service_.probe_fidelity(probe_from_json(args))));
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown tool '" + name + "'");
}

}  // namespace lc::protocol
