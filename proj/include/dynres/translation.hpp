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
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dynres {

// Version tag of the bundled prompt template. Part of every cache key, so
// editing the template invalidates cached translations.
std::string_view prompt_template_version();

// Raw template text with its [system] / [user] sections and placeholders.
std::string_view prompt_template();

struct TranslationPrompt {
  std::string system_text;
  std::string user_text;
  std::string target_language;
};

// Throws Error(kEmptyInput) when either argument is empty.
TranslationPrompt render_prompt(std::string_view target_language,
                                std::string_view text);

enum class JobStatus { kPending, kDone, kFailed };

std::string_view to_string(JobStatus status);

struct TranslationJob {
  std::string job_id;
  std::string source_text;
  std::string target_language;
  JobStatus status = JobStatus::kPending;
  std::optional<std::string> result;
  int attempts = 0;
  std::string last_error;
};

// Chat-completion backend. complete() returns the assistant text or throws
// TransportError. Implementations must be callable from several threads.
class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  virtual std::string complete(const std::string& system_text,
                               const std::string& user_text) = 0;
};

// 64 hex chars: SHA-256 over the length-prefixed fields
// (template_version, target_language, text).
std::string cache_key(std::string_view target_language, std::string_view text,
                      std::string_view template_version);

// One JSON file per key under `dir`. Writes go to a temporary file that is
// renamed into place, so readers never observe a partial entry.
class TranslationCache {
 public:
  explicit TranslationCache(std::filesystem::path dir);

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& result,
           std::string_view target_language);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path entry_path(const std::string& key) const;

  std::filesystem::path dir_;
};

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{1000};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{30000};
  // Delay is scaled by a uniform factor in [1 - jitter, 1 + jitter].
  double jitter = 0.2;
  // Injected so tests do not actually sleep.
  std::function<void(std::chrono::milliseconds)> sleep;

  // Delay before retry number `retry` (1-based), with `unit` in [0, 1)
  // choosing the jitter.
  std::chrono::milliseconds backoff(int retry, double unit) const;
};

// Token bucket: `rate` tokens per second, up to `burst` stored. A rate of
// zero disables limiting.
class RateLimiter {
 public:
  RateLimiter(double rate, double burst);
  void acquire();

 private:
  using Clock = std::chrono::steady_clock;
  double rate_;
  double burst_;
  double tokens_;
  Clock::time_point last_;
  std::mutex mu_;
};

struct BatchOptions {
  unsigned concurrency = 8;
  double requests_per_second = 0.0;
};

/// Resolves every job from the cache or the client. Output order matches
/// input order. Jobs already done are passed through untouched. A job whose
/// retries are exhausted is marked failed with attempts = max_retries + 1;
/// other jobs are unaffected.
std::vector<TranslationJob> translate_batch(std::vector<TranslationJob> jobs,
                                            CompletionClient& client,
                                            TranslationCache& cache,
                                            const RetryPolicy& policy,
                                            const BatchOptions& options = {});

}  // namespace dynres
