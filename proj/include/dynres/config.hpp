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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dynres/dataset_mixture.hpp"
#include "dynres/tile_planner.hpp"

namespace dynres {

enum class LogLevel { kDebug, kInfo, kWarn, kError, kOff };

std::optional<LogLevel> parse_log_level(std::string_view name);
std::string_view to_string(LogLevel level);

struct TranslationSettings {
  std::string endpoint;
  std::string model;
  std::string language = "Chinese";
  std::string cache_dir = ".dynres-cache";
  std::string wire_map;  // optional path to a WireMapping JSON file
  unsigned concurrency = 8;
  int max_retries = 3;
  int initial_backoff_ms = 1000;
  int timeout_ms = 60000;
  double rate_limit = 0.0;  // requests per second, 0 = unlimited
};

struct IoSettings {
  std::string input;
  std::string output;
  unsigned jobs = 0;  // 0 = one per processor core
};

struct AppConfig {
  PlannerConfig planner;
  std::vector<MixtureBucket> mixture;  // empty = no override
  TranslationSettings translation;
  IoSettings io;
  LogLevel log_level = LogLevel::kWarn;
};

// "section.key" -> raw value, as written in a file or passed on the command
// line. Top-level keys have no section prefix.
using Setting = std::pair<std::string, std::string>;

/// Parses the config grammar:
///
///   # comment
///   log_level = "info"
///   [planner]
///   max_tiles = 40
///
/// Values are quoted strings, integers, reals, or true/false. Bare words are
/// accepted as strings. Throws Error(kConfig) with the line number.
std::vector<Setting> parse_config_text(std::string_view text);

/// Applies one setting. Unknown keys and ill-typed values throw
/// Error(kConfig) naming the key path.
void apply_setting(AppConfig& config, const Setting& setting);

/// Defaults, then the file (if any), then `overrides` in order. Flags win.
AppConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<Setting>& overrides = {});

}  // namespace dynres
