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

#include "dynres/serialization.hpp"

#include <string>
#include <type_traits>
#include <utility>

#include "dynres/errors.hpp"

namespace dynres {
namespace {

template <typename T>
T require(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kParse, std::string("missing key '") + key + "'");
  }
  const auto& v = j.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) {
      throw Error(ErrorCode::kParse, std::string("'") + key + "' must be a boolean");
    }
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) {
      throw Error(ErrorCode::kParse, std::string("'") + key + "' must be an integer");
    }
  }
  return v.get<T>();
}

}  // namespace

nlohmann::json grid_to_json(const RatioGrid& grid) {
  return {{"columns", grid.columns}, {"rows", grid.rows}, {"tiles", grid.tiles()}};
}

nlohmann::json plan_to_json(const TilePlan& plan) {
  return {
      {"grid_columns", plan.grid.columns},
      {"grid_rows", plan.grid.rows},
      {"resize_width", plan.resize_width},
      {"resize_height", plan.resize_height},
      {"tile_count", plan.tile_count},
      {"include_thumbnail", plan.include_thumbnail},
      {"visual_tokens", plan.visual_tokens},
  };
}

TilePlan plan_from_json(const nlohmann::json& j, const PlannerConfig& config) {
  TilePlan p;
  p.grid.columns = require<int>(j, "grid_columns");
  p.grid.rows = require<int>(j, "grid_rows");
  p.resize_width = require<int>(j, "resize_width");
  p.resize_height = require<int>(j, "resize_height");
  p.tile_count = require<int>(j, "tile_count");
  p.include_thumbnail = require<bool>(j, "include_thumbnail");
  p.visual_tokens = require<int>(j, "visual_tokens");

  if (p.grid.columns < 1 || p.grid.rows < 1) {
    throw Error(ErrorCode::kParse, "grid dimensions must be positive");
  }
  const int tiles = p.grid.tiles();
  if (tiles < config.min_tiles || tiles > config.max_tiles) {
    throw Error(ErrorCode::kParse, "grid tile count " + std::to_string(tiles) +
                                       " outside configured range");
  }
  if (p != make_plan(p.grid, config)) {
    throw Error(ErrorCode::kParse, "plan fields are inconsistent with its grid");
  }
  return p;
}

nlohmann::json feature_grid_to_json(const FeatureGrid& grid) {
  return {{"height", grid.height},
          {"width", grid.width},
          {"channels", grid.channels},
          {"values", grid.values}};
}

FeatureGrid feature_grid_from_json(const nlohmann::json& j) {
  const int h = require<int>(j, "height");
  const int w = require<int>(j, "width");
  const int c = require<int>(j, "channels");
  const auto& values = j.at("values");
  if (!values.is_array()) {
    throw Error(ErrorCode::kParse, "'values' must be an array");
  }
  std::vector<double> flat;
  flat.reserve(values.size());
  for (const auto& v : values) {
    if (!v.is_number()) {
      throw Error(ErrorCode::kParse, "'values' must contain only numbers");
    }
    flat.push_back(v.get<double>());
  }
  try {
    return FeatureGrid(h, w, c, std::move(flat));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

}  // namespace dynres
