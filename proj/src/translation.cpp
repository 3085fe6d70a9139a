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

#include "dynres/translation.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "dynres/batch.hpp"
#include "dynres/errors.hpp"
#include "dynres/prompt_template.hpp"

namespace dynres {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kSystemHeader = "[system]\n";
constexpr std::string_view kUserHeader = "[user]\n";

struct TemplateSections {
  std::string_view system;
  std::string_view user;
};

std::string_view trim_newlines(std::string_view s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

TemplateSections split_template() {
  const std::string_view text = generated::kPromptTemplate;
  const auto sys = text.find(kSystemHeader);
  const auto usr = text.find(kUserHeader);
  const auto sys_begin = sys + kSystemHeader.size();
  return {trim_newlines(text.substr(sys_begin, usr - sys_begin)),
          trim_newlines(text.substr(usr + kUserHeader.size()))};
}

std::string replace_all(std::string_view haystack, std::string_view needle,
                        std::string_view value) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const auto hit = haystack.find(needle, pos);
    if (hit == std::string_view::npos) break;
    out.append(haystack.substr(pos, hit - pos));
    out.append(value);
    pos = hit + needle.size();
  }
  out.append(haystack.substr(pos));
  return out;
}

void append_field(std::string& buf, std::string_view field) {
  std::uint64_t n = field.size();
  for (int i = 0; i < 8; ++i) {
    buf.push_back(static_cast<char>((n >> (8 * i)) & 0xff));
  }
  buf.append(field);
}

double thread_unit() {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::string_view prompt_template_version() {
  return generated::kPromptTemplateVersion;
}

std::string_view prompt_template() { return generated::kPromptTemplate; }

TranslationPrompt render_prompt(std::string_view target_language,
                                std::string_view text) {
  if (target_language.empty()) {
    throw Error(ErrorCode::kEmptyInput, "target language must not be empty");
  }
  if (text.empty()) {
    throw Error(ErrorCode::kEmptyInput, "text for translation must not be empty");
  }
  static const TemplateSections sections = split_template();
  return {replace_all(sections.system, "{language}", target_language),
          replace_all(sections.user, "{text}", text),
          std::string(target_language)};
}

std::string_view to_string(JobStatus status) {
  switch (status) {
    case JobStatus::kPending:
      return "pending";
    case JobStatus::kDone:
      return "done";
    case JobStatus::kFailed:
      return "failed";
  }
  return "unknown";
}

std::string cache_key(std::string_view target_language, std::string_view text,
                      std::string_view template_version) {
  std::string buf;
  buf.reserve(24 + template_version.size() + target_language.size() + text.size());
  append_field(buf, template_version);
  append_field(buf, target_language);
  append_field(buf, text);

  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(buf.data(), buf.size(), digest.data(), &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(ErrorCode::kIo, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xf]);
  }
  return hex;
}

TranslationCache::TranslationCache(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot create cache directory " + dir_.string() +
                                    ": " + ec.message());
  }
}

fs::path TranslationCache::entry_path(const std::string& key) const {
  return dir_ / (key + ".json");
}

std::optional<std::string> TranslationCache::get(const std::string& key) const {
  std::ifstream in(entry_path(key));
  if (!in) return std::nullopt;
  const auto j = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.contains("result") || !j["result"].is_string()) {
    return std::nullopt;
  }
  return j["result"].get<std::string>();
}

void TranslationCache::put(const std::string& key, const std::string& result,
                           std::string_view target_language) {
  const nlohmann::json entry = {
      {"result", result},
      {"target_language", target_language},
      {"template_version", prompt_template_version()},
  };
  std::ostringstream tmp_name;
  tmp_name << key << ".tmp." << std::this_thread::get_id();
  const fs::path tmp = dir_ / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << entry.dump() << '\n';
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, entry_path(key), ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot commit cache entry " + key);
  }
}

std::chrono::milliseconds RetryPolicy::backoff(int retry, double unit) const {
  double base = static_cast<double>(initial_backoff.count()) *
                std::pow(multiplier, std::max(0, retry - 1));
  base = std::min(base, static_cast<double>(max_backoff.count()));
  const double scale = 1.0 + jitter * (2.0 * unit - 1.0);
  return std::chrono::milliseconds(
      static_cast<std::int64_t>(std::llround(std::max(0.0, base * scale))));
}

RateLimiter::RateLimiter(double rate, double burst)
    : rate_(rate), burst_(std::max(1.0, burst)), tokens_(burst_), last_(Clock::now()) {}

void RateLimiter::acquire() {
  if (rate_ <= 0.0) return;
  while (true) {
    std::chrono::duration<double> wait{};
    {
      std::lock_guard lock(mu_);
      const auto now = Clock::now();
      tokens_ = std::min(burst_, tokens_ + rate_ * std::chrono::duration<double>(now - last_).count());
      last_ = now;
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
    }
    std::this_thread::sleep_for(wait);
  }
}

std::vector<TranslationJob> translate_batch(std::vector<TranslationJob> jobs,
                                            CompletionClient& client,
                                            TranslationCache& cache,
                                            const RetryPolicy& policy,
                                            const BatchOptions& options) {
  RateLimiter limiter(options.requests_per_second,
                      std::max(1.0, options.requests_per_second));
  const int max_attempts = std::max(0, policy.max_retries) + 1;
  auto sleep = policy.sleep ? policy.sleep : [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };

  parallel_for(jobs.size(), std::max(1u, options.concurrency), [&](std::size_t i) {
    TranslationJob& job = jobs[i];
    if (job.status == JobStatus::kDone && job.result) return;

    const std::string key =
        cache_key(job.target_language, job.source_text, prompt_template_version());
    if (auto hit = cache.get(key)) {
      job.result = std::move(hit);
      job.status = JobStatus::kDone;
      return;
    }

    TranslationPrompt prompt;
    try {
      prompt = render_prompt(job.target_language, job.source_text);
    } catch (const Error& e) {
      job.status = JobStatus::kFailed;
      job.last_error = e.what();
      return;
    }

    job.attempts = 0;
    job.result.reset();
    while (job.attempts < max_attempts) {
      if (job.attempts > 0) sleep(policy.backoff(job.attempts, thread_unit()));
      ++job.attempts;
      limiter.acquire();
      std::string text;
      try {
        text = client.complete(prompt.system_text, prompt.user_text);
      } catch (const std::exception& e) {
        job.last_error = e.what();
        continue;
      }
      if (text.empty()) {
        job.last_error = "empty completion";
        continue;
      }
      job.last_error.clear();
      try {
        cache.put(key, text, job.target_language);
      } catch (const Error& e) {
        job.last_error = e.what();
      }
      job.result = std::move(text);
      job.status = JobStatus::kDone;
      return;
    }
    job.status = JobStatus::kFailed;
  });
  return jobs;
}

}  // namespace dynres
