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

#include "dynres/dataset_mixture.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "dynres/errors.hpp"

namespace dynres {
namespace {

constexpr std::array<std::pair<Task, std::string_view>, 14> kTaskNames = {{
    {Task::kCaptioning, "captioning"},
    {Task::kDetection, "detection"},
    {Task::kOcrLarge, "ocr_large"},
    {Task::kOcrSmall, "ocr_small"},
    {Task::kGeneralQa, "general_qa"},
    {Task::kScience, "science"},
    {Task::kChart, "chart"},
    {Task::kMathematics, "mathematics"},
    {Task::kKnowledge, "knowledge"},
    {Task::kOcrFt, "ocr_ft"},
    {Task::kDocument, "document"},
    {Task::kGrounding, "grounding"},
    {Task::kConversation, "conversation"},
    {Task::kTextOnly, "text_only"},
}};

constexpr std::array<std::pair<Language, std::string_view>, 3> kLanguageNames = {{
    {Language::kEn, "en"},
    {Language::kZh, "zh"},
    {Language::kEnZh, "en_zh"},
}};

std::string required_string(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error(ErrorCode::kParse, std::string("missing field '") + key + "'");
  }
  if (!j.at(key).is_string()) {
    throw Error(ErrorCode::kParse, std::string("field '") + key + "' must be a string");
  }
  return j.at(key).get<std::string>();
}

// Unbiased integer in [0, bound) by rejection.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t k = bound;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % k;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % k);
}

double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::string_view to_string(Task task) {
  for (const auto& [t, name] : kTaskNames) {
    if (t == task) return name;
  }
  return "unknown";
}

std::string_view to_string(Language language) {
  for (const auto& [l, name] : kLanguageNames) {
    if (l == language) return name;
  }
  return "unknown";
}

std::optional<Task> parse_task(std::string_view name) {
  for (const auto& [t, n] : kTaskNames) {
    if (n == name) return t;
  }
  return std::nullopt;
}

std::optional<Language> parse_language(std::string_view name) {
  for (const auto& [l, n] : kLanguageNames) {
    if (n == name) return l;
  }
  return std::nullopt;
}

nlohmann::json record_to_json(const ManifestRecord& record) {
  return {{"sample_id", record.sample_id},
          {"path", record.path},
          {"task", to_string(record.task)},
          {"language", to_string(record.language)},
          {"dataset_name", record.dataset_name}};
}

ManifestRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParse, "record must be a JSON object");
  }
  ManifestRecord r;
  r.sample_id = required_string(j, "sample_id");
  r.path = required_string(j, "path");
  if (r.path.empty()) {
    throw Error(ErrorCode::kParse, "field 'path' must not be empty");
  }
  const std::string task = required_string(j, "task");
  const auto t = parse_task(task);
  if (!t) throw Error(ErrorCode::kParse, "unknown task '" + task + "'");
  r.task = *t;
  const std::string language = required_string(j, "language");
  const auto l = parse_language(language);
  if (!l) throw Error(ErrorCode::kParse, "unknown language '" + language + "'");
  r.language = *l;
  r.dataset_name = required_string(j, "dataset_name");
  return r;
}

MixtureSpec::MixtureSpec(std::vector<MixtureBucket> buckets)
    : buckets_(std::move(buckets)) {
  double total = 0.0;
  for (std::size_t i = 0; i < buckets_.size(); ++i) {
    const auto& b = buckets_[i];
    if (!std::isfinite(b.weight) || b.weight < 0.0) {
      throw Error(ErrorCode::kInvalidRange,
                  "weight for " + std::string(to_string(b.task)) +
                      " must be a finite non-negative number");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (buckets_[k].task == b.task) {
        throw Error(ErrorCode::kInvalidRange,
                    "duplicate bucket " + std::string(to_string(b.task)));
      }
    }
    total += b.weight;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInvalidRange, "mixture needs a positive total weight");
  }
}

MixtureSpec MixtureSpec::pretrain_default() {
  return MixtureSpec({{Task::kCaptioning, 0.539},
                      {Task::kDetection, 0.052},
                      {Task::kOcrLarge, 0.320},
                      {Task::kOcrSmall, 0.089}});
}

MixtureSpec MixtureSpec::uniform_by_record(const std::vector<ManifestRecord>& records) {
  std::map<Task, std::size_t> counts;
  for (const auto& r : records) ++counts[r.task];
  std::vector<MixtureBucket> buckets;
  for (const auto& [task, count] : counts) {
    buckets.push_back({task, static_cast<double>(count)});
  }
  return MixtureSpec(std::move(buckets));
}

MixtureSpec MixtureSpec::from_json(const nlohmann::json& j) {
  const nlohmann::json& body = (j.is_object() && j.contains("buckets")) ? j.at("buckets") : j;
  if (!body.is_object()) {
    throw Error(ErrorCode::kParse, "mixture spec must map task names to weights");
  }
  std::vector<MixtureBucket> buckets;
  for (const auto& [name, weight] : body.items()) {
    const auto task = parse_task(name);
    if (!task) throw Error(ErrorCode::kParse, "unknown task '" + name + "'");
    if (!weight.is_number()) {
      throw Error(ErrorCode::kParse, "weight for '" + name + "' must be a number");
    }
    buckets.push_back({*task, weight.get<double>()});
  }
  return MixtureSpec(std::move(buckets));
}

std::vector<MixtureBucket> MixtureSpec::normalized() const {
  double total = 0.0;
  for (const auto& b : buckets_) total += b.weight;
  std::vector<MixtureBucket> out = buckets_;
  for (auto& b : out) b.weight /= total;
  return out;
}

std::vector<ManifestRecord> parse_manifest(std::istream& in) {
  std::vector<ManifestRecord> out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, line_start, e.what());
    } catch (const Error& e) {
      throw ParseError(line_no, line_start, e.what());
    }
  }
  return out;
}

std::vector<ManifestRecord> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open manifest " + path.string());
  }
  return parse_manifest(in);
}

std::vector<ManifestRecord> sample(const std::vector<ManifestRecord>& records,
                                   const MixtureSpec& spec, std::size_t n,
                                   std::uint64_t seed) {
  const auto buckets = spec.normalized();
  std::vector<std::vector<std::size_t>> members(buckets.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t b = 0; b < buckets.size(); ++b) {
      if (buckets[b].task == records[i].task) {
        members[b].push_back(i);
        break;
      }
    }
  }

  std::vector<double> cumulative(buckets.size());
  double running = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    if (buckets[b].weight > 0.0) {
      if (members[b].empty()) {
        throw Error(ErrorCode::kEmptyBucket,
                    "no records for task '" + std::string(to_string(buckets[b].task)) +
                        "' which has positive weight");
      }
      last_positive = b;
    }
    running += buckets[b].weight;
    cumulative[b] = running;
  }

  std::mt19937_64 rng(seed);
  std::vector<ManifestRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = unit_interval(rng);
    std::size_t b = last_positive;
    for (std::size_t k = 0; k < buckets.size(); ++k) {
      if (buckets[k].weight > 0.0 && u < cumulative[k]) {
        b = k;
        break;
      }
    }
    const auto& pool = members[b];
    out.push_back(records[pool[uniform_index(rng, pool.size())]]);
  }
  return out;
}

std::map<Task, BucketStats> mixture_report(const std::vector<ManifestRecord>& samples) {
  std::map<Task, BucketStats> report;
  for (const auto& s : samples) ++report[s.task].count;
  for (auto& [task, stats] : report) {
    stats.fraction = static_cast<double>(stats.count) / static_cast<double>(samples.size());
  }
  return report;
}

}  // namespace dynres
