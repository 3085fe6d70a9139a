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

#include "dynres/tile_planner.hpp"

#include <string>

#include "dynres/errors.hpp"

namespace dynres {
namespace {

using Wide = __int128;

Wide abs_wide(Wide v) { return v < 0 ? -v : v; }

// |w/h - c/r| = |w*r - h*c| / (h*r). h is shared by every candidate, so two
// differences compare as |w*r_a - h*c_a| * r_b  vs  |w*r_b - h*c_b| * r_a.
int compare_ratio_diff(ImageDims dims, RatioGrid a, RatioGrid b) {
  const Wide num_a = abs_wide(Wide{dims.width} * a.rows - Wide{dims.height} * a.columns);
  const Wide num_b = abs_wide(Wide{dims.width} * b.rows - Wide{dims.height} * b.columns);
  const Wide lhs = num_a * b.rows;
  const Wide rhs = num_b * a.rows;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

void check_dims(ImageDims dims) {
  if (dims.width < 1 || dims.height < 1) {
    throw Error(ErrorCode::kInvalidDimensions,
                "image dimensions must be positive, got " +
                    std::to_string(dims.width) + "x" +
                    std::to_string(dims.height));
  }
}

}  // namespace

void PlannerConfig::validate() const {
  if (tile_size < 1) {
    throw Error(ErrorCode::kInvalidRange, "tile_size must be positive");
  }
  if (tokens_per_tile < 1) {
    throw Error(ErrorCode::kInvalidRange, "tokens_per_tile must be positive");
  }
  if (min_tiles < 1 || min_tiles > max_tiles) {
    throw Error(ErrorCode::kInvalidRange,
                "tile range [" + std::to_string(min_tiles) + ", " +
                    std::to_string(max_tiles) + "] is invalid");
  }
}

RatioGrid closest_ratio(ImageDims dims, const RatioCatalog& catalog,
                        const PlannerConfig& config) {
  check_dims(dims);
  if (catalog.empty()) {
    throw Error(ErrorCode::kInvalidRange, "ratio catalog is empty");
  }
  const Wide twice_area = Wide{2} * dims.width * dims.height;
  const Wide tile_area = Wide{config.tile_size} * config.tile_size;

  RatioGrid best = catalog.entries().front();
  for (const RatioGrid& candidate : catalog.entries().subspan(1)) {
    const int cmp = compare_ratio_diff(dims, candidate, best);
    if (cmp < 0) {
      best = candidate;
    } else if (cmp == 0 && tile_area * candidate.tiles() < twice_area) {
      best = candidate;
    }
  }
  return best;
}

TilePlan make_plan(RatioGrid grid, const PlannerConfig& config) {
  TilePlan p;
  p.grid = grid;
  p.resize_width = grid.columns * config.tile_size;
  p.resize_height = grid.rows * config.tile_size;
  p.tile_count = grid.tiles();
  p.include_thumbnail = config.use_thumbnail && p.tile_count > 1;
  p.visual_tokens =
      config.tokens_per_tile * (p.tile_count + (p.include_thumbnail ? 1 : 0));
  return p;
}

TilePlan plan(ImageDims dims, const RatioCatalog& catalog,
              const PlannerConfig& config) {
  check_dims(dims);
  config.validate();
  return make_plan(closest_ratio(dims, catalog, config), config);
}

TilePlan plan(ImageDims dims, const PlannerConfig& config) {
  check_dims(dims);
  config.validate();
  return plan(dims, build_catalog(config.min_tiles, config.max_tiles), config);
}

TokenBounds token_bounds(const PlannerConfig& config) {
  config.validate();
  auto tokens_for = [&](int tiles) {
    const bool thumb = config.use_thumbnail && tiles > 1;
    return config.tokens_per_tile * (tiles + (thumb ? 1 : 0));
  };
  return {tokens_for(config.min_tiles), tokens_for(config.max_tiles)};
}

}  // namespace dynres
