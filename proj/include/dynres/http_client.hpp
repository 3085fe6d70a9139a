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

#pragma once

#include <chrono>
#include <string>

#include <nlohmann/json.hpp>

#include "dynres/translation.hpp"

namespace dynres {

// Field names of the chat-completion wire format. The request body is
//   {"<system_field>": ..., "<user_field>": ..., "<model_field>": ...}
// and the completion text is read from the response at the JSON pointer
// `response_pointer`.
struct WireMapping {
  std::string system_field = "system";
  std::string user_field = "user";
  std::string model_field = "model";
  std::string response_pointer = "/completion";

  // {"request": {"system": ..., "user": ..., "model": ...},
  //  "response": "/pointer"}; absent keys keep their defaults.
  static WireMapping from_json(const nlohmann::json& j);
};

struct HttpClientConfig {
  std::string endpoint;  // http[s]://host[:port]/path
  std::string model;
  std::string api_key;   // sent as "Authorization: Bearer <key>" when set
  std::chrono::milliseconds timeout{60000};
  WireMapping wire;
};

// Environment variable consulted for the credential.
inline constexpr const char* kApiKeyEnv = "DYNRES_API_KEY";

class HttpCompletionClient : public CompletionClient {
 public:
  // Throws Error(kUsage) for an unparseable endpoint.
  explicit HttpCompletionClient(HttpClientConfig config);

  std::string complete(const std::string& system_text,
                       const std::string& user_text) override;

 private:
  HttpClientConfig config_;
  std::string origin_;  // scheme://host:port
  std::string path_;
};

}  // namespace dynres
