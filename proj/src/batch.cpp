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

#include "dynres/batch.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "dynres/errors.hpp"
#include "dynres/image_io.hpp"
#include "dynres/serialization.hpp"

namespace dynres {

namespace fs = std::filesystem;

unsigned default_jobs() {
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mu);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

std::string tile_file_name(const std::string& source_id, int row, int col) {
  return source_id + "_tile_" + std::to_string(row) + "_" + std::to_string(col) +
         ".png";
}

std::string thumbnail_file_name(const std::string& source_id) {
  return source_id + "_thumb.png";
}

std::string sidecar_file_name(const std::string& source_id) {
  return source_id + ".json";
}

std::vector<fs::path> write_tileset(const TileSet& set, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " + ec.message());
  }
  std::vector<fs::path> written;
  nlohmann::json files = nlohmann::json::array();
  const int cols = set.plan.grid.columns;
  for (std::size_t i = 0; i < set.tiles.size(); ++i) {
    const int row = static_cast<int>(i) / cols;
    const int col = static_cast<int>(i) % cols;
    auto path = out_dir / tile_file_name(set.source_id, row, col);
    write_png(path, set.tiles[i]);
    files.push_back(path.filename().string());
    written.push_back(std::move(path));
  }
  if (set.thumbnail) {
    auto path = out_dir / thumbnail_file_name(set.source_id);
    write_png(path, *set.thumbnail);
    files.push_back(path.filename().string());
    written.push_back(std::move(path));
  }

  const nlohmann::json sidecar = {
      {"source_id", set.source_id},
      {"plan", plan_to_json(set.plan)},
      {"files", files},
  };
  auto sidecar_path = out_dir / sidecar_file_name(set.source_id);
  std::ofstream out(sidecar_path);
  out << sidecar.dump(2) << '\n';
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + sidecar_path.string());
  }
  written.push_back(std::move(sidecar_path));
  return written;
}

std::vector<fs::path> collect_images(const fs::path& input) {
  std::error_code ec;
  if (fs::is_regular_file(input, ec)) {
    return {input};
  }
  if (!fs::is_directory(input, ec)) {
    throw Error(ErrorCode::kIo, "no such file or directory: " + input.string());
  }
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(input)) {
    if (entry.is_regular_file() && is_supported_image(entry.path())) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

BatchReport tile_files(const std::vector<fs::path>& inputs,
                       const fs::path& out_dir, const PlannerConfig& config,
                       unsigned jobs) {
  config.validate();
  const RatioCatalog catalog = build_catalog(config.min_tiles, config.max_tiles);
  BatchReport report;
  std::mutex mu;
  parallel_for(inputs.size(), jobs, [&](std::size_t i) {
    const fs::path& input = inputs[i];
    try {
      const RasterImage image = read_image(input);
      const TilePlan p = plan(image.dims(), catalog, config);
      write_tileset(process(image, p, config, input.stem().string()), out_dir);
      std::lock_guard lock(mu);
      ++report.processed;
    } catch (const std::exception& e) {
      std::lock_guard lock(mu);
      report.failures.push_back({input, e.what()});
    }
  });
  std::sort(report.failures.begin(), report.failures.end(),
            [](const TileFailure& a, const TileFailure& b) { return a.input < b.input; });
  return report;
}

}  // namespace dynres
