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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Each check recomputes its result; nothing is cached.

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

#include "dynres/batch.hpp"
#include "dynres/dataset_mixture.hpp"
#include "dynres/pixel_shuffle.hpp"
#include "dynres/ratio_catalog.hpp"
#include "dynres/tile_planner.hpp"
#include "dynres/tiler.hpp"
#include "dynres/translation.hpp"
#include "oracles.hpp"
#include "stub_client.hpp"
#include "test_helpers.hpp"

using namespace dynres;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_ms, const std::function<Outcome()>& fn) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  std::string note = o.detail;
  if (budget_ms > 0 && ms > budget_ms) {
    o.ok = false;
    note += (note.empty() ? "" : "; ") + std::string("over time budget");
  }
  if (!o.ok) ++failures;
  std::printf("%s  %2d  %-28s %10.2f ms  %s\n", o.ok ? "PASS" : "FAIL", id, name, ms,
              note.c_str());
  std::fflush(stdout);
}

Outcome expect(bool cond, std::string detail) { return {cond, std::move(detail)}; }

// --- 1 ---------------------------------------------------------------------
Outcome catalog_cardinality() {
  const auto c = build_catalog(1, 12);
  return expect(catalog_len(c) == 35, "entries=" + std::to_string(catalog_len(c)));
}

// --- 2 ---------------------------------------------------------------------
Outcome worked_example() {
  const auto p = plan({800, 1300}, PlannerConfig{});
  std::ostringstream d;
  d << "grid=(" << p.grid.columns << "," << p.grid.rows << ") resize=" << p.resize_width << "x"
    << p.resize_height;
  return expect(p.grid == RatioGrid{2, 3} && p.resize_width == 896 && p.resize_height == 1344,
                d.str());
}

// --- 3 ---------------------------------------------------------------------
Outcome token_bounds_check() {
  const auto b = token_bounds(PlannerConfig{});
  PlannerConfig wide;
  wide.max_tiles = 40;
  const auto w = token_bounds(wide);
  std::ostringstream d;
  d << "default=(" << b.min_tokens << "," << b.max_tokens << ") max40=" << w.max_tokens;
  return expect(b.min_tokens == 256 && b.max_tokens == 3328 && w.max_tokens == 10496, d.str());
}

// --- 4 ---------------------------------------------------------------------
Outcome per_tile_tokens() {
  const auto g = patch_grid(448, 14);
  FeatureGrid features(g.rows, g.cols, 8);
  for (std::size_t i = 0; i < features.values.size(); ++i) features.values[i] = double(i);
  const auto reduced = unshuffle(features, 2);
  std::ostringstream d;
  d << "patches=" << g.rows << "x" << g.cols << " positions " << features.positions() << "->"
    << reduced.positions();
  return expect(g.rows == 32 && g.cols == 32 && features.positions() == 1024 &&
                    reduced.positions() == 256 && reduced.channels == 32,
                d.str());
}

// --- 5 ---------------------------------------------------------------------
Outcome tie_break_suite() {
  const PlannerConfig cfg;
  const auto catalog = build_catalog(cfg.min_tiles, cfg.max_tiles);
  std::mt19937_64 rng(20240425);
  std::uniform_int_distribution<std::int64_t> dim(1, 8192);
  int mismatches = 0;
  int tie_cases = 0;
  int guard_violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::int64_t w = dim(rng);
    const std::int64_t h = dim(rng);
    const auto got = closest_ratio({w, h}, catalog, cfg);
    const auto ref = oracle::brute_force_closest(w, h, cfg.min_tiles, cfg.max_tiles, cfg.tile_size);
    if (got.columns != ref.chosen.columns || got.rows != ref.chosen.rows) ++mismatches;
    if (ref.ties.size() > 1) {
      ++tie_cases;
      // Leaving the first tie is only allowed under the 2x-area guard.
      const auto& first = ref.ties.front();
      const bool moved = got.columns != first.columns || got.rows != first.rows;
      const std::int64_t area = std::int64_t(got.tiles()) * cfg.tile_size * cfg.tile_size;
      if (moved && !(area < 2 * w * h)) ++guard_violations;
    }
  }
  return expect(mismatches == 0 && guard_violations == 0,
                "mismatches=" + std::to_string(mismatches) + " tie_cases=" +
                    std::to_string(tie_cases) + " guard_violations=" +
                    std::to_string(guard_violations));
}

// --- 6 ---------------------------------------------------------------------
Outcome shuffle_properties() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> factor_d(1, 4), cells(1, 8), chan(1, 6);
  std::uniform_real_distribution<double> val(-1e6, 1e6);
  int bad_round_trip = 0;
  int bad_multiset = 0;
  int bad_shape = 0;
  for (int i = 0; i < 1000; ++i) {
    const int f = factor_d(rng);
    FeatureGrid g(cells(rng) * f, cells(rng) * f, chan(rng));
    for (auto& v : g.values) v = val(rng);
    const auto u = unshuffle(g, f);
    if (u.positions() * f * f != g.positions() || u.channels != g.channels * f * f) ++bad_shape;
    if (shuffle(u, f) != g) ++bad_round_trip;
    auto a = g.values, b = u.values;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) ++bad_multiset;
  }
  return expect(bad_round_trip == 0 && bad_multiset == 0 && bad_shape == 0,
                "round_trip_failures=" + std::to_string(bad_round_trip) +
                    " multiset_failures=" + std::to_string(bad_multiset) +
                    " shape_failures=" + std::to_string(bad_shape));
}

// --- 7 ---------------------------------------------------------------------
Outcome slicing_reconstruction() {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> span(1, 4), tile(1, 64), pick(0, 2);
  const int channel_choices[] = {1, 3, 4};
  int failed = 0;
  for (int i = 0; i < 100; ++i) {
    const RatioGrid grid{span(rng), span(rng)};
    const int t = tile(rng);
    const int c = channel_choices[pick(rng)];
    const auto img = testing::random_image(grid.columns * t, grid.rows * t, c, rng());
    const auto tiles = slice(img, grid, t);
    // Row-major concatenation back into a canvas.
    std::vector<std::uint8_t> canvas(img.pixels.size());
    const std::size_t row_bytes = std::size_t(t) * c;
    for (int r = 0; r < grid.rows; ++r) {
      for (int col = 0; col < grid.columns; ++col) {
        const auto& piece = tiles[std::size_t(r) * grid.columns + col];
        for (int y = 0; y < t; ++y) {
          const std::size_t dst = (std::size_t(r * t + y) * img.width + std::size_t(col) * t) * c;
          std::copy_n(piece.pixels.begin() + std::size_t(y) * row_bytes, row_bytes,
                      canvas.begin() + dst);
        }
      }
    }
    if (tiles.size() != std::size_t(grid.tiles()) || canvas != img.pixels) ++failed;
  }
  return expect(failed == 0, "failed_images=" + std::to_string(failed) + "/100");
}

// --- 8 ---------------------------------------------------------------------
Outcome mixture_convergence() {
  std::vector<ManifestRecord> records;
  const Task tasks[] = {Task::kCaptioning, Task::kDetection, Task::kOcrLarge, Task::kOcrSmall};
  const double expected[] = {0.539, 0.052, 0.320, 0.089};
  int id = 0;
  for (const Task task : tasks) {
    for (int i = 0; i < 50; ++i) {
      records.push_back({std::to_string(id++), "/data/img.jpg", task, Language::kEn, "synthetic"});
    }
  }
  const auto spec = MixtureSpec::pretrain_default();
  constexpr std::size_t n = 100000;
  constexpr std::uint64_t seed = 1234;
  const auto a = sample(records, spec, n, seed);
  const auto b = sample(records, spec, n, seed);
  auto serialize = [](const std::vector<ManifestRecord>& v) {
    std::string s;
    for (const auto& r : v) s += record_to_json(r).dump() + "\n";
    return s;
  };
  const bool reproducible = serialize(a) == serialize(b);

  const auto report = mixture_report(a);
  double chi2 = 0.0;
  double worst = 0.0;
  std::ostringstream d;
  d.precision(4);
  for (int i = 0; i < 4; ++i) {
    const auto it = report.find(tasks[i]);
    const double count = it == report.end() ? 0.0 : double(it->second.count);
    const double exp_count = expected[i] * n;
    chi2 += (count - exp_count) * (count - exp_count) / exp_count;
    worst = std::max(worst, std::abs(count / n - expected[i]));
    d << to_string(tasks[i]) << "=" << count / n << " ";
  }
  const double critical =
      boost::math::quantile(boost::math::complement(boost::math::chi_squared(3), 0.001));
  d << "max_dev=" << worst << " chi2=" << chi2 << " crit=" << critical
    << " reproducible=" << (reproducible ? "yes" : "no");
  return expect(worst <= 0.01 && chi2 < critical && reproducible && a.size() == n, d.str());
}

// --- 9 ---------------------------------------------------------------------
Outcome translation_pipeline() {
  testing::TempDir dir("acceptance_translate");
  RetryPolicy policy;
  policy.sleep = [](std::chrono::milliseconds) {};
  std::vector<std::string> problems;

  std::vector<TranslationJob> jobs;
  for (int i = 0; i < 12; ++i) {
    TranslationJob j;
    j.job_id = "job-" + std::to_string(i);
    j.source_text = "sentence number " + std::to_string(i);
    j.target_language = "Chinese";
    jobs.push_back(j);
  }

  // Idempotence and order.
  {
    TranslationCache cache(dir.path() / "cache");
    testing::StubClient client;
    BatchOptions opts;
    opts.concurrency = 4;
    const auto first = translate_batch(jobs, client, cache, policy, opts);
    const int first_calls = client.calls;
    const auto second = translate_batch(jobs, client, cache, policy, opts);
    const int second_calls = client.calls - first_calls;
    if (first_calls != 12) problems.push_back("first_run_calls=" + std::to_string(first_calls));
    if (second_calls != 0) problems.push_back("second_run_calls=" + std::to_string(second_calls));
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (first[i].job_id != jobs[i].job_id || second[i].job_id != jobs[i].job_id ||
          first[i].status != JobStatus::kDone || second[i].result != first[i].result ||
          first[i].result->find(jobs[i].source_text) == std::string::npos) {
        problems.push_back("order/result mismatch at " + std::to_string(i));
        break;
      }
    }
  }

  // Retry then succeed: two transient failures, success on the third attempt.
  {
    TranslationCache cache(dir.path() / "retry-cache");
    testing::StubClient client(2);
    const auto out = translate_batch({jobs.front()}, client, cache, policy);
    if (out.size() != 1 || out[0].status != JobStatus::kDone || out[0].attempts != 3) {
      problems.push_back("retry attempts=" + std::to_string(out.empty() ? -1 : out[0].attempts));
    }
  }

  // Prompt head and rules.
  {
    const auto p = render_prompt("Chinese", "Hello");
    const char* needles[] = {
        "You are a translator proficient in English and Chinese",
        "1. Keep proper nouns",
        "2. ",
        "3. ",
        "4. ",
        "5. ",
    };
    for (const char* needle : needles) {
      if (p.system_text.find(needle) == std::string::npos) {
        problems.push_back(std::string("prompt missing '") + needle + "'");
      }
    }
    if (p.user_text.find("Hello") == std::string::npos) problems.push_back("user text missing");
  }

  std::string detail = problems.empty() ? "idempotent, attempts=3, ordered, prompt ok" : "";
  for (const auto& p : problems) detail += p + "; ";
  return expect(problems.empty(), detail);
}

// --- 10 --------------------------------------------------------------------
Outcome throughput() {
  constexpr int kImages = 1000;
  constexpr unsigned kJobs = 4;
  const PlannerConfig cfg;
  // A small pool of distinct sources; every image is still fully processed.
  std::vector<RasterImage> pool;
  for (int i = 0; i < 4; ++i) pool.push_back(testing::random_image(1920, 1080, 3, 100 + i));
  std::vector<std::size_t> tile_counts(kImages);
  parallel_for(kImages, kJobs, [&](std::size_t i) {
    const auto& img = pool[i % pool.size()];
    const auto p = plan(img.dims(), cfg);
    const auto set = process(img, p, cfg, "img" + std::to_string(i));
    tile_counts[i] = set.ordered().size();
  });
  const bool all = std::all_of(tile_counts.begin(), tile_counts.end(),
                               [](std::size_t n) { return n == 9; });
  return expect(all, std::to_string(kImages) + " images x 1920x1080, jobs=" +
                         std::to_string(kJobs) + ", hw_threads=" +
                         std::to_string(std::thread::hardware_concurrency()) +
                         ", 8 tiles + thumbnail each");
}

}  // namespace

int main() {
  std::printf("dynres acceptance suite\n");
  criterion(1, "catalog cardinality", 1.0, catalog_cardinality);
  criterion(2, "worked example 800x1300", 1.0, worked_example);
  criterion(3, "token bounds", 0, token_bounds_check);
  criterion(4, "per-tile tokens", 0, per_tile_tokens);
  criterion(5, "tie-break property suite", 5000.0, tie_break_suite);
  criterion(6, "pixel-shuffle properties", 5000.0, shuffle_properties);
  criterion(7, "slicing reconstruction", 0, slicing_reconstruction);
  criterion(8, "mixture convergence", 10000.0, mixture_convergence);
  criterion(9, "translation pipeline", 0, translation_pipeline);
  criterion(10, "tiling throughput 1080p", 60000.0, throughput);
  std::printf("%s: %d of 10 criteria failed\n", failures == 0 ? "OK" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
