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

#include "dynres/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dynres/batch.hpp"
#include "dynres/config.hpp"
#include "dynres/dataset_mixture.hpp"
#include "dynres/http_client.hpp"
#include "dynres/pixel_shuffle.hpp"
#include "dynres/ratio_catalog.hpp"
#include "dynres/serialization.hpp"
#include "dynres/tile_planner.hpp"
#include "dynres/translation.hpp"

#ifndef DYNRES_VERSION
#define DYNRES_VERSION "0.0.0"
#endif

namespace dynres::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class Logger {
 public:
  Logger(std::ostream& err, LogLevel level) : err_(err), level_(level) {}

  void set_level(LogLevel level) { level_ = level; }

  void log(LogLevel level, const std::string& msg) const {
    if (level < level_ || level_ == LogLevel::kOff) return;
    err_ << json{{"level", to_string(level)}, {"msg", msg}}.dump() << '\n';
  }

 private:
  std::ostream& err_;
  LogLevel level_;
};

// Flags that mirror config keys. Raw strings are collected and applied on
// top of the config file so both paths share one validator.
class Overrides {
 public:
  void add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help) {
    auto& slot = values_[key];
    options_.push_back({app->add_option(flag, slot, help), key});
  }

  void add_flag(CLI::App* app, const std::string& flag, const std::string& key,
                const std::string& value, const std::string& help) {
    options_.push_back({app->add_flag(flag, help), key});
    fixed_[key] = value;
  }

  std::vector<Setting> collect() const {
    std::vector<Setting> out;
    for (const auto& [opt, key] : options_) {
      if (opt->count() == 0) continue;
      const auto fixed = fixed_.find(key);
      out.emplace_back(key, fixed != fixed_.end() ? fixed->second : values_.at(key));
    }
    return out;
  }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> fixed_;
  std::vector<std::pair<CLI::Option*, std::string>> options_;
};

void add_planner_flags(CLI::App* app, Overrides& o) {
  o.add(app, "--tile-size", "planner.tile_size", "Tile edge in pixels (default 448)");
  o.add(app, "--min-tiles", "planner.min_tiles", "Smallest tile budget (default 1)");
  o.add(app, "--max-tiles", "planner.max_tiles", "Largest tile budget (default 12)");
  o.add(app, "--tokens-per-tile", "planner.tokens_per_tile",
        "Visual tokens per tile (default 256)");
  o.add_flag(app, "--no-thumbnail", "planner.use_thumbnail", "false",
             "Never append the global thumbnail");
}

unsigned resolve_jobs(unsigned jobs) { return jobs == 0 ? default_jobs() : jobs; }

void write_jsonl(std::ostream& out, const std::vector<json>& rows) {
  for (const auto& r : rows) out << r.dump() << '\n';
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIo, "cannot open output " + path);
  return f;
}

std::string read_all(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_catalog(const AppConfig& cfg, std::ostream& out) {
  const auto catalog = build_catalog(cfg.planner.min_tiles, cfg.planner.max_tiles);
  for (const auto& g : catalog) out << grid_to_json(g).dump() << '\n';
  return kExitOk;
}

int cmd_plan(const AppConfig& cfg, std::int64_t width, std::int64_t height,
             std::ostream& out) {
  out << plan_to_json(plan({width, height}, cfg.planner)).dump() << '\n';
  return kExitOk;
}

int cmd_tile(const AppConfig& cfg, const Logger& log, std::ostream& out) {
  if (cfg.io.input.empty()) throw Error(ErrorCode::kUsage, "tile needs --input");
  if (cfg.io.output.empty()) throw Error(ErrorCode::kUsage, "tile needs --output");
  cfg.planner.validate();
  const auto inputs = collect_images(cfg.io.input);
  const unsigned jobs = resolve_jobs(cfg.io.jobs);
  log.log(LogLevel::kInfo, "tiling " + std::to_string(inputs.size()) + " image(s) with " +
                               std::to_string(jobs) + " job(s)");
  const auto report = tile_files(inputs, cfg.io.output, cfg.planner, jobs);

  json failed = json::array();
  for (const auto& f : report.failures) {
    log.log(LogLevel::kError, f.input.string() + ": " + f.message);
    failed.push_back({{"input", f.input.string()}, {"error", f.message}});
  }
  out << json{{"processed", report.processed}, {"failed", failed}}.dump() << '\n';
  return report.failures.empty() ? kExitOk : kExitData;
}

int cmd_shuffle_demo(const std::string& input, int factor, bool inverse,
                     std::istream& in, std::ostream& out) {
  std::string text;
  if (input.empty() || input == "-") {
    text = read_all(in);
  } else {
    std::ifstream f(input);
    if (!f) throw Error(ErrorCode::kIo, "cannot open " + input);
    text = read_all(f);
  }
  const auto j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kParse, "input is not valid JSON");
  const FeatureGrid grid = feature_grid_from_json(j);
  const FeatureGrid result = inverse ? shuffle(grid, factor) : unshuffle(grid, factor);
  out << feature_grid_to_json(result).dump() << '\n';
  return kExitOk;
}

MixtureSpec resolve_spec(const std::string& spec, const AppConfig& cfg,
                         const std::vector<ManifestRecord>& records) {
  if (spec.empty()) {
    return cfg.mixture.empty() ? MixtureSpec::pretrain_default() : MixtureSpec(cfg.mixture);
  }
  if (spec == "pretrain-default") return MixtureSpec::pretrain_default();
  if (spec == "finetune-uniform") return MixtureSpec::uniform_by_record(records);
  std::ifstream f(spec);
  if (!f) throw Error(ErrorCode::kIo, "cannot open mixture spec " + spec);
  const auto j = json::parse(f, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kParse, spec + ": not valid JSON");
  return MixtureSpec::from_json(j);
}

int cmd_mix(const AppConfig& cfg, const std::string& manifest, const std::string& spec,
            std::size_t n, std::uint64_t seed, const std::string& out_path,
            std::ostream& out) {
  const auto records = load_manifest(manifest);
  const auto samples = sample(records, resolve_spec(spec, cfg, records), n, seed);
  std::vector<json> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) rows.push_back(record_to_json(s));
  if (out_path.empty()) {
    write_jsonl(out, rows);
  } else {
    auto f = open_output(out_path);
    write_jsonl(f, rows);
    out << json{{"written", samples.size()}, {"out", out_path}}.dump() << '\n';
  }
  return kExitOk;
}

int cmd_stats(const std::string& input, std::ostream& out, std::ostream& err) {
  const auto samples = load_manifest(input);
  const auto report = mixture_report(samples);
  json buckets = json::object();
  for (const auto& [task, s] : report) {
    buckets[std::string(to_string(task))] = {{"count", s.count}, {"fraction", s.fraction}};
  }
  out << json{{"total", samples.size()}, {"buckets", buckets}}.dump() << '\n';

  err << std::left << std::setw(14) << "task" << std::right << std::setw(10) << "count"
      << std::setw(10) << "fraction" << '\n';
  for (const auto& [task, s] : report) {
    err << std::left << std::setw(14) << to_string(task) << std::right << std::setw(10)
        << s.count << std::setw(9) << std::fixed << std::setprecision(2)
        << 100.0 * s.fraction << "%\n";
  }
  return kExitOk;
}

int cmd_translate(const AppConfig& cfg, const std::string& manifest,
                  const std::string& out_path, const Logger& log, std::ostream& out) {
  const auto& t = cfg.translation;
  if (manifest.empty()) throw Error(ErrorCode::kUsage, "translate needs --manifest");
  if (t.endpoint.empty()) throw Error(ErrorCode::kUsage, "translate needs --endpoint");

  std::ifstream in(manifest);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest " + manifest);
  std::vector<json> rows;
  std::vector<TranslationJob> jobs;
  std::string line;
  std::size_t line_no = 0, offset = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t start = offset;
    offset += line.size() + 1;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto row = json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object()) {
      throw ParseError(line_no, start, "not a JSON object");
    }
    if (!row.contains("source_text") || !row["source_text"].is_string()) {
      throw ParseError(line_no, start, "missing string field 'source_text'");
    }
    TranslationJob job;
    for (const char* id_key : {"job_id", "sample_id", "id"}) {
      if (row.contains(id_key) && row[id_key].is_string()) {
        job.job_id = row[id_key].get<std::string>();
        break;
      }
    }
    if (job.job_id.empty()) job.job_id = "line-" + std::to_string(line_no);
    job.source_text = row["source_text"].get<std::string>();
    job.target_language = t.language;
    if (row.value("translation_status", "") == "done" && row.contains("translation") &&
        row["translation"].is_string() && row.value("target_language", "") == t.language) {
      job.status = JobStatus::kDone;
      job.result = row["translation"].get<std::string>();
      job.attempts = row.value("translation_attempts", 0);
    }
    rows.push_back(std::move(row));
    jobs.push_back(std::move(job));
  }

  HttpClientConfig http;
  http.endpoint = t.endpoint;
  http.model = t.model;
  http.timeout = std::chrono::milliseconds(t.timeout_ms);
  if (const char* key = std::getenv(kApiKeyEnv)) http.api_key = key;
  if (!t.wire_map.empty()) {
    std::ifstream f(t.wire_map);
    if (!f) throw Error(ErrorCode::kConfig, "cannot open wire map " + t.wire_map);
    const auto j = json::parse(f, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::kConfig, t.wire_map + ": not valid JSON");
    http.wire = WireMapping::from_json(j);
  }
  HttpCompletionClient client(http);
  TranslationCache cache(t.cache_dir);
  RetryPolicy policy;
  policy.max_retries = t.max_retries;
  policy.initial_backoff = std::chrono::milliseconds(t.initial_backoff_ms);
  BatchOptions options;
  options.concurrency = t.concurrency;
  options.requests_per_second = t.rate_limit;

  log.log(LogLevel::kInfo, "translating " + std::to_string(jobs.size()) + " record(s) into " +
                               t.language);
  const auto done = translate_batch(std::move(jobs), client, cache, policy, options);

  std::size_t failed = 0;
  for (std::size_t i = 0; i < done.size(); ++i) {
    const auto& job = done[i];
    auto& row = rows[i];
    row["target_language"] = job.target_language;
    row["translation"] = job.result ? json(*job.result) : json(nullptr);
    row["translation_status"] = to_string(job.status);
    row["translation_attempts"] = job.attempts;
    if (job.status == JobStatus::kFailed) {
      ++failed;
      log.log(LogLevel::kError, job.job_id + ": " + job.last_error);
    }
  }
  if (out_path.empty()) {
    write_jsonl(out, rows);
  } else {
    auto f = open_output(out_path);
    write_jsonl(f, rows);
  }
  if (failed > 0) {
    throw TransportError(std::to_string(failed) + " of " + std::to_string(done.size()) +
                         " translation job(s) failed after retries");
  }
  return kExitOk;
}

void print_error(std::ostream& err, ErrorCode code, const std::string& message) {
  err << json{{"level", "error"}, {"code", to_string(code)}, {"message", message}}.dump()
      << '\n';
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
    case ErrorCode::kConfig:
    case ErrorCode::kInvalidRange:
    case ErrorCode::kInvalidDimensions:
    case ErrorCode::kInvalidTarget:
      return kExitUsage;
    case ErrorCode::kTransport:
      return kExitTransport;
    case ErrorCode::kIo:
    case ErrorCode::kParse:
    case ErrorCode::kEmptyBucket:
    case ErrorCode::kEmptyInput:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kNotDivisible:
      return kExitData;
  }
  return kExitData;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic-resolution image tiling and dataset preparation", "dynres"};
  app.set_version_flag("--version",
                       std::string("dynres ") + DYNRES_VERSION + " (prompt template " +
                           std::string(prompt_template_version()) + ")");
  app.fallthrough();

  std::string config_path;
  std::string log_level;
  app.add_option("--config", config_path, "Config file (key = value with [sections])");
  app.add_option("--log-level", log_level, "debug, info, warn (default), error, off");

  Overrides overrides;

  auto* catalog = app.add_subcommand("catalog", "List tile grids as JSON lines");
  overrides.add(catalog, "--min-tiles", "planner.min_tiles", "Smallest tile count");
  overrides.add(catalog, "--max-tiles", "planner.max_tiles", "Largest tile count");

  std::int64_t width = 0, height = 0;
  auto* plan_cmd = app.add_subcommand("plan", "Print the tile plan for an image size");
  plan_cmd->add_option("--width", width, "Image width in pixels")->required();
  plan_cmd->add_option("--height", height, "Image height in pixels")->required();
  add_planner_flags(plan_cmd, overrides);

  auto* tile = app.add_subcommand("tile", "Tile an image or a directory of images");
  overrides.add(tile, "--input", "io.input", "Image file or directory");
  overrides.add(tile, "--output", "io.output", "Output directory");
  overrides.add(tile, "--jobs", "io.jobs", "Worker threads (default: processor count)");
  add_planner_flags(tile, overrides);

  std::string shuffle_input;
  int factor = 2;
  bool inverse = false;
  auto* demo = app.add_subcommand("shuffle-demo", "Pixel-unshuffle a JSON feature grid");
  demo->add_option("--input", shuffle_input, "JSON file, or - for stdin (default)");
  demo->add_option("--factor", factor, "Shuffle factor (default 2)");
  demo->add_flag("--inverse", inverse, "Apply the inverse (depth-to-space) instead");

  std::string manifest, spec, mix_out;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  auto* mix = app.add_subcommand("mix", "Sample a weighted task mixture from a manifest");
  mix->add_option("--manifest", manifest, "Manifest JSONL")->required();
  mix->add_option("--spec", spec,
                  "Mixture JSON file, pretrain-default, or finetune-uniform");
  mix->add_option("--n", n, "Number of samples")->required();
  mix->add_option("--seed", seed, "Random seed (default 0)");
  mix->add_option("--out", mix_out, "Output JSONL (default stdout)");

  std::string stats_input;
  auto* stats = app.add_subcommand("stats", "Report the task mixture of a JSONL sample");
  stats->add_option("--input", stats_input, "Records JSONL")->required();

  std::string translate_manifest, translate_out;
  auto* translate = app.add_subcommand("translate", "Translate source_text fields via an LLM");
  translate->add_option("--manifest", translate_manifest, "JSONL with source_text fields");
  translate->add_option("--out", translate_out, "Output JSONL (default stdout)");
  overrides.add(translate, "--language", "translation.language", "Target language");
  overrides.add(translate, "--endpoint", "translation.endpoint", "Chat-completion URL");
  overrides.add(translate, "--model", "translation.model", "Model name sent upstream");
  overrides.add(translate, "--cache-dir", "translation.cache_dir", "Result cache directory");
  overrides.add(translate, "--concurrency", "translation.concurrency", "Requests in flight");
  overrides.add(translate, "--max-retries", "translation.max_retries", "Retries per job");
  overrides.add(translate, "--rate-limit", "translation.rate_limit", "Requests per second");
  overrides.add(translate, "--timeout-ms", "translation.timeout_ms", "Request timeout");
  overrides.add(translate, "--initial-backoff-ms", "translation.initial_backoff_ms",
                "First retry delay");
  overrides.add(translate, "--wire-map", "translation.wire_map", "Wire field mapping JSON file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    print_error(err, ErrorCode::kUsage, e.what());
    err << app.help();
    return kExitUsage;
  }

  if (app.get_subcommands().empty()) {
    err << app.help();
    return kExitUsage;
  }

  Logger log(err, LogLevel::kWarn);
  try {
    auto settings = overrides.collect();
    if (!log_level.empty()) settings.emplace_back("log_level", log_level);
    const AppConfig cfg = load_config(
        config_path.empty() ? std::nullopt : std::optional<fs::path>(config_path), settings);
    log.set_level(cfg.log_level);

    if (catalog->parsed()) return cmd_catalog(cfg, out);
    if (plan_cmd->parsed()) return cmd_plan(cfg, width, height, out);
    if (tile->parsed()) return cmd_tile(cfg, log, out);
    if (demo->parsed()) return cmd_shuffle_demo(shuffle_input, factor, inverse, std::cin, out);
    if (mix->parsed()) return cmd_mix(cfg, manifest, spec, n, seed, mix_out, out);
    if (stats->parsed()) return cmd_stats(stats_input, out, err);
    if (translate->parsed()) {
      return cmd_translate(cfg, translate_manifest, translate_out, log, out);
    }
  } catch (const Error& e) {
    print_error(err, e.code(), e.what());
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    print_error(err, ErrorCode::kParse, e.what());
    return kExitData;
  } catch (const std::exception& e) {
    print_error(err, ErrorCode::kIo, e.what());
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace dynres::cli
