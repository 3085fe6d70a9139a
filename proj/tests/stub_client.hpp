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

#include <atomic>
#include <map>
#include <mutex>
#include <string>

#include "dynres/errors.hpp"
#include "dynres/translation.hpp"

namespace dynres::testing {

// Scripted backend: fails the first `failures_before_success` calls for each
// distinct user text, then answers "<language-tag>:<user text>". Counts calls.
class StubClient : public CompletionClient {
 public:
  explicit StubClient(int failures_before_success = 0, std::string fail_text = {})
      : failures_(failures_before_success), always_fail_text_(std::move(fail_text)) {}

  std::string complete(const std::string& system_text, const std::string& user_text) override {
    ++calls;
    std::lock_guard lock(mu_);
    last_system = system_text;
    if (!always_fail_text_.empty() && user_text.find(always_fail_text_) != std::string::npos) {
      throw TransportError("scripted permanent failure");
    }
    int& seen = seen_[user_text];
    if (seen++ < failures_) throw TransportError("scripted transient failure");
    return "translated:" + user_text;
  }

  std::atomic<int> calls{0};
  std::string last_system;

 private:
  int failures_;
  std::string always_fail_text_;
  std::mutex mu_;
  std::map<std::string, int> seen_;
};

}  // namespace dynres::testing
