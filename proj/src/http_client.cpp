/* Copyright 2026 The dynres Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "dynres/http_client.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <regex>

#include "dynres/errors.hpp"

namespace dynres {

WireMapping WireMapping::from_json(const nlohmann::json& j) {
  WireMapping m;
  auto read = [](const nlohmann::json& obj, const char* key, std::string& dst) {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_string()) {
      throw Error(ErrorCode::kConfig, std::string("wire mapping '") + key +
                                          "' must be a string");
    }
    dst = obj.at(key).get<std::string>();
  };
  if (!j.is_object()) {
    throw Error(ErrorCode::kConfig, "wire mapping must be a JSON object");
  }
  if (j.contains("request")) {
    const auto& req = j.at("request");
    if (!req.is_object()) {
      throw Error(ErrorCode::kConfig, "wire mapping 'request' must be an object");
    }
    read(req, "system", m.system_field);
    read(req, "user", m.user_field);
    read(req, "model", m.model_field);
  }
  read(j, "response", m.response_pointer);
  return m;
}

HttpCompletionClient::HttpCompletionClient(HttpClientConfig config)
    : config_(std::move(config)) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.endpoint, m, kUrl)) {
    throw Error(ErrorCode::kUsage, "endpoint must look like http[s]://host[:port]/path, got '" +
                                       config_.endpoint + "'");
  }
  origin_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/";
  try {
    (void)nlohmann::json::json_pointer(config_.wire.response_pointer);
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kConfig,
                "invalid response pointer '" + config_.wire.response_pointer + "'");
  }
}

std::string HttpCompletionClient::complete(const std::string& system_text,
                                           const std::string& user_text) {
  nlohmann::json body;
  body[config_.wire.system_field] = system_text;
  body[config_.wire.user_field] = user_text;
  body[config_.wire.model_field] = config_.model;

  httplib::Client cli(origin_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }
  const auto res = cli.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    throw TransportError("request to " + config_.endpoint +
                         " failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw TransportError("endpoint returned HTTP " + std::to_string(res->status));
  }
  const auto reply = nlohmann::json::parse(res->body, nullptr, false);
  if (reply.is_discarded()) {
    throw TransportError("endpoint returned a non-JSON body");
  }
  const nlohmann::json::json_pointer ptr(config_.wire.response_pointer);
  if (!reply.contains(ptr) || !reply.at(ptr).is_string()) {
    throw TransportError("response has no string at " + config_.wire.response_pointer);
  }
  return reply.at(ptr).get<std::string>();
}

}  // namespace dynres
