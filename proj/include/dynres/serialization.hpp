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

#include <nlohmann/json.hpp>

#include "dynres/pixel_shuffle.hpp"
#include "dynres/ratio_catalog.hpp"
#include "dynres/tile_planner.hpp"

namespace dynres {

// {"columns": c, "rows": r, "tiles": c*r}
nlohmann::json grid_to_json(const RatioGrid& grid);

// Flat object with keys grid_columns, grid_rows, resize_width, resize_height,
// tile_count, include_thumbnail, visual_tokens.
nlohmann::json plan_to_json(const TilePlan& plan);

// Inverse of plan_to_json. Rejects missing keys, wrong types, and any
// combination that violates the TilePlan invariants under `config`. Throws
// Error(kParse).
TilePlan plan_from_json(const nlohmann::json& j, const PlannerConfig& config);

nlohmann::json feature_grid_to_json(const FeatureGrid& grid);
FeatureGrid feature_grid_from_json(const nlohmann::json& j);

}  // namespace dynres
