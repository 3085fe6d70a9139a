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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace dynres {

enum class Task {
  kCaptioning,
  kDetection,
  kOcrLarge,
  kOcrSmall,
  kGeneralQa,
  kScience,
  kChart,
  kMathematics,
  kKnowledge,
  kOcrFt,
  kDocument,
  kGrounding,
  kConversation,
  kTextOnly,
};

enum class Language { kEn, kZh, kEnZh };

std::string_view to_string(Task task);
std::string_view to_string(Language language);
std::optional<Task> parse_task(std::string_view name);
std::optional<Language> parse_language(std::string_view name);

struct ManifestRecord {
  std::string sample_id;
  std::string path;
  Task task = Task::kCaptioning;
  Language language = Language::kEn;
  std::string dataset_name;

  friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

nlohmann::json record_to_json(const ManifestRecord& record);

// Throws Error(kParse) naming the offending field.
ManifestRecord record_from_json(const nlohmann::json& j);

struct MixtureBucket {
  Task task;
  double weight;
};

class MixtureSpec {
 public:
  MixtureSpec() = default;
  // Throws Error(kInvalidRange) on negative/non-finite weights, duplicate
  // tasks, or an all-zero vector.
  explicit MixtureSpec(std::vector<MixtureBucket> buckets);

  // Pre-training task mix: captioning 53.9%, detection 5.2%, OCR (large)
  // 32.0%, OCR (small) 8.9%.
  static MixtureSpec pretrain_default();

  // Each task weighted by its record count, i.e. uniform over records.
  static MixtureSpec uniform_by_record(const std::vector<ManifestRecord>& records);

  // Accepts {"captioning": 0.5, ...} or {"buckets": {...}}.
  static MixtureSpec from_json(const nlohmann::json& j);

  const std::vector<MixtureBucket>& buckets() const { return buckets_; }

  // Weights rescaled to sum to one.
  std::vector<MixtureBucket> normalized() const;

 private:
  std::vector<MixtureBucket> buckets_;
};

std::vector<ManifestRecord> parse_manifest(std::istream& in);

// Throws Error(kIo) if the file cannot be opened, ParseError for bad lines.
std::vector<ManifestRecord> load_manifest(const std::filesystem::path& path);

/// Draws n records with replacement, bucket first.
///
/// Generator: std::mt19937_64 seeded with `seed` (its output sequence is fixed
/// by the C++ standard). Each draw consumes two outputs. The first picks the
/// bucket: u = (x >> 11) * 2^-53 is compared against the running sum of the
/// normalized weights in spec order. The second picks a record uniformly in
/// that bucket by rejection (x mod k over the largest multiple of k).
/// Records keep manifest order inside each bucket.
///
/// Throws Error(kEmptyBucket) naming the task when a positive-weight bucket
/// has no records.
std::vector<ManifestRecord> sample(const std::vector<ManifestRecord>& records,
                                   const MixtureSpec& spec, std::size_t n,
                                   std::uint64_t seed);

struct BucketStats {
  std::size_t count = 0;
  double fraction = 0.0;
};

std::map<Task, BucketStats> mixture_report(
    const std::vector<ManifestRecord>& samples);

}  // namespace dynres
