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

#include "dynres/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "dynres/errors.hpp"

namespace dynres {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, std::string_view expected,
                            std::string_view raw) {
  throw Error(ErrorCode::kConfig, "config: " + key + ": expected " +
                                      std::string(expected) + ", got '" +
                                      std::string(raw) + "'");
}

long long as_integer(const Setting& s, long long min_value) {
  long long v = 0;
  const auto& raw = s.second;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
    bad_value(s.first, "an integer", raw);
  }
  if (v < min_value) bad_value(s.first, "an integer >= " + std::to_string(min_value), raw);
  if (v > 0x7fffffff) bad_value(s.first, "a 32-bit integer", raw);
  return v;
}

double as_real(const Setting& s) {
  const auto& raw = s.second;
  std::istringstream in(raw);
  double v = 0.0;
  in >> v;
  if (!in || !in.eof() || !std::isfinite(v)) bad_value(s.first, "a number", raw);
  return v;
}

bool as_bool(const Setting& s) {
  if (s.second == "true") return true;
  if (s.second == "false") return false;
  bad_value(s.first, "true or false", s.second);
}

using Setter = std::function<void(AppConfig&, const Setting&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"log_level",
       [](AppConfig& c, const Setting& s) {
         const auto level = parse_log_level(s.second);
         if (!level) bad_value(s.first, "one of debug, info, warn, error, off", s.second);
         c.log_level = *level;
       }},
      {"planner.tile_size",
       [](AppConfig& c, const Setting& s) { c.planner.tile_size = int(as_integer(s, 1)); }},
      {"planner.min_tiles",
       [](AppConfig& c, const Setting& s) { c.planner.min_tiles = int(as_integer(s, 1)); }},
      {"planner.max_tiles",
       [](AppConfig& c, const Setting& s) { c.planner.max_tiles = int(as_integer(s, 1)); }},
      {"planner.tokens_per_tile",
       [](AppConfig& c, const Setting& s) {
         c.planner.tokens_per_tile = int(as_integer(s, 1));
       }},
      {"planner.use_thumbnail",
       [](AppConfig& c, const Setting& s) { c.planner.use_thumbnail = as_bool(s); }},
      {"translation.endpoint",
       [](AppConfig& c, const Setting& s) { c.translation.endpoint = s.second; }},
      {"translation.model",
       [](AppConfig& c, const Setting& s) { c.translation.model = s.second; }},
      {"translation.language",
       [](AppConfig& c, const Setting& s) { c.translation.language = s.second; }},
      {"translation.cache_dir",
       [](AppConfig& c, const Setting& s) { c.translation.cache_dir = s.second; }},
      {"translation.wire_map",
       [](AppConfig& c, const Setting& s) { c.translation.wire_map = s.second; }},
      {"translation.concurrency",
       [](AppConfig& c, const Setting& s) {
         c.translation.concurrency = unsigned(as_integer(s, 1));
       }},
      {"translation.max_retries",
       [](AppConfig& c, const Setting& s) {
         c.translation.max_retries = int(as_integer(s, 0));
       }},
      {"translation.initial_backoff_ms",
       [](AppConfig& c, const Setting& s) {
         c.translation.initial_backoff_ms = int(as_integer(s, 0));
       }},
      {"translation.timeout_ms",
       [](AppConfig& c, const Setting& s) {
         c.translation.timeout_ms = int(as_integer(s, 1));
       }},
      {"translation.rate_limit",
       [](AppConfig& c, const Setting& s) {
         const double v = as_real(s);
         if (v < 0) bad_value(s.first, "a non-negative number", s.second);
         c.translation.rate_limit = v;
       }},
      {"io.input", [](AppConfig& c, const Setting& s) { c.io.input = s.second; }},
      {"io.output", [](AppConfig& c, const Setting& s) { c.io.output = s.second; }},
      {"io.jobs",
       [](AppConfig& c, const Setting& s) { c.io.jobs = unsigned(as_integer(s, 0)); }},
  };
  return table;
}

}  // namespace

std::optional<LogLevel> parse_log_level(std::string_view name) {
  if (name == "debug") return LogLevel::kDebug;
  if (name == "info") return LogLevel::kInfo;
  if (name == "warn") return LogLevel::kWarn;
  if (name == "error") return LogLevel::kError;
  if (name == "off") return LogLevel::kOff;
  return std::nullopt;
}

std::string_view to_string(LogLevel level) {
  switch (level) {
    case LogLevel::kDebug:
      return "debug";
    case LogLevel::kInfo:
      return "info";
    case LogLevel::kWarn:
      return "warn";
    case LogLevel::kError:
      return "error";
    case LogLevel::kOff:
      return "off";
  }
  return "warn";
}

std::vector<Setting> parse_config_text(std::string_view text) {
  std::vector<Setting> out;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw_line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto where = [&] { return "config line " + std::to_string(line_no) + ": "; };

    std::string_view line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::kConfig, where() + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw Error(ErrorCode::kConfig, where() + "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfig, where() + "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::kConfig, where() + "missing key");

    std::string parsed;
    if (!value.empty() && value.front() == '"') {
      const auto close = value.find('"', 1);
      if (close == std::string_view::npos) {
        throw Error(ErrorCode::kConfig, where() + "unterminated string");
      }
      const auto rest = trim(value.substr(close + 1));
      if (!rest.empty() && rest.front() != '#') {
        throw Error(ErrorCode::kConfig, where() + "trailing characters after string");
      }
      parsed = std::string(value.substr(1, close - 1));
    } else {
      const auto hash = value.find('#');
      parsed = std::string(trim(value.substr(0, hash)));
    }
    out.emplace_back(section.empty() ? key : section + "." + key, std::move(parsed));
  }
  return out;
}

void apply_setting(AppConfig& config, const Setting& setting) {
  const auto& [key, value] = setting;
  constexpr std::string_view kMixturePrefix = "mixture.";
  if (key.starts_with(kMixturePrefix)) {
    const auto task_name = std::string_view(key).substr(kMixturePrefix.size());
    const auto task = parse_task(task_name);
    if (!task) throw Error(ErrorCode::kConfig, "config: " + key + ": unknown task");
    const double weight = as_real(setting);
    if (weight < 0) bad_value(key, "a non-negative weight", value);
    for (auto& b : config.mixture) {
      if (b.task == *task) {
        b.weight = weight;
        return;
      }
    }
    config.mixture.push_back({*task, weight});
    return;
  }
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) {
    throw Error(ErrorCode::kConfig, "config: " + key + ": unknown key");
  }
  it->second(config, setting);
}

AppConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<Setting>& overrides) {
  AppConfig config;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw Error(ErrorCode::kConfig, "cannot open config file " + path->string());
    std::ostringstream buf;
    buf << in.rdbuf();
    for (const auto& s : parse_config_text(buf.str())) apply_setting(config, s);
  }
  for (const auto& s : overrides) apply_setting(config, s);
  return config;
}

}  // namespace dynres
