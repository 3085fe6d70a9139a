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

#include <cstdint>

#include "dynres/ratio_catalog.hpp"

namespace dynres {

struct ImageDims {
  std::int64_t width = 0;
  std::int64_t height = 0;
};

struct PlannerConfig {
  int tile_size = 448;
  int min_tiles = 1;
  int max_tiles = 12;
  int tokens_per_tile = 256;
  bool use_thumbnail = true;

  // Throws Error(kInvalidRange) when a field is out of range.
  void validate() const;

  friend bool operator==(const PlannerConfig&, const PlannerConfig&) = default;
};

struct TilePlan {
  RatioGrid grid;
  int resize_width = 0;
  int resize_height = 0;
  int tile_count = 0;
  bool include_thumbnail = false;
  int visual_tokens = 0;

  friend bool operator==(const TilePlan&, const TilePlan&) = default;
};

struct TokenBounds {
  int min_tokens = 0;
  int max_tokens = 0;

  friend bool operator==(const TokenBounds&, const TokenBounds&) = default;
};

/// Picks the catalog grid whose columns/rows ratio is closest to
/// width/height.
///
/// Candidates are scanned in catalog order. A candidate replaces the current
/// best when its ratio difference is strictly smaller, or when it ties and
/// its target area (tiles * tile_size^2) is below twice the input area. The
/// comparison is exact: ratio differences are compared by cross
/// multiplication, never in floating point, so 1:1 and 2:2 really tie.
RatioGrid closest_ratio(ImageDims dims, const RatioCatalog& catalog,
                        const PlannerConfig& config);

/// Full plan for one image. Throws Error(kInvalidDimensions) for
/// non-positive sizes.
TilePlan plan(ImageDims dims, const PlannerConfig& config);

/// Same as plan() but reuses a catalog built from config's tile range.
TilePlan plan(ImageDims dims, const RatioCatalog& catalog,
              const PlannerConfig& config);

/// Derives the remaining TilePlan fields for an already chosen grid.
TilePlan make_plan(RatioGrid grid, const PlannerConfig& config);

TokenBounds token_bounds(const PlannerConfig& config);

}  // namespace dynres
