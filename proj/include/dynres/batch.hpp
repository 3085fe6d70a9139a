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
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "dynres/tile_planner.hpp"
#include "dynres/tiler.hpp"

namespace dynres {

// Runs body(i) for i in [0, count) on up to `jobs` threads. Each index is
// visited exactly once. The first exception thrown by any body is rethrown
// after all workers have joined.
void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& body);

unsigned default_jobs();

// Output naming is a pure function of (source_id, position) so concurrent
// writers never collide.
std::string tile_file_name(const std::string& source_id, int row, int col);
std::string thumbnail_file_name(const std::string& source_id);
std::string sidecar_file_name(const std::string& source_id);

// Writes every tile and the thumbnail as PNG plus a JSON sidecar holding the
// plan. Returns the written paths in serialization order (sidecar last).
std::vector<std::filesystem::path> write_tileset(
    const TileSet& set, const std::filesystem::path& out_dir);

// Expands a file or directory into the sorted list of supported images.
std::vector<std::filesystem::path> collect_images(
    const std::filesystem::path& input);

struct TileFailure {
  std::filesystem::path input;
  std::string message;
};

struct BatchReport {
  std::size_t processed = 0;
  std::vector<TileFailure> failures;
};

// Reads, plans, tiles and writes each input. source_id is the file stem.
// Per-image errors are collected, not thrown.
BatchReport tile_files(const std::vector<std::filesystem::path>& inputs,
                       const std::filesystem::path& out_dir,
                       const PlannerConfig& config, unsigned jobs);

}  // namespace dynres
