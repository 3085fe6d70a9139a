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

#include <compare>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace dynres {

// A tile grid: `columns` tiles across, `rows` tiles down.
struct RatioGrid {
  int columns = 1;
  int rows = 1;

  int tiles() const { return columns * rows; }

  friend bool operator==(const RatioGrid&, const RatioGrid&) = default;
};

// Every (columns, rows) grid whose tile count lies in [min_tiles, max_tiles],
// ordered by tile count ascending, then by columns ascending. Immutable once
// built.
class RatioCatalog {
 public:
  int min_tiles() const { return min_tiles_; }
  int max_tiles() const { return max_tiles_; }
  std::span<const RatioGrid> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  friend RatioCatalog build_catalog(int min_tiles, int max_tiles);

  RatioCatalog(int min_tiles, int max_tiles, std::vector<RatioGrid> entries)
      : min_tiles_(min_tiles),
        max_tiles_(max_tiles),
        entries_(std::move(entries)) {}

  int min_tiles_;
  int max_tiles_;
  std::vector<RatioGrid> entries_;
};

// Throws Error(kInvalidRange) unless 1 <= min_tiles <= max_tiles.
RatioCatalog build_catalog(int min_tiles, int max_tiles);

std::size_t catalog_len(const RatioCatalog& catalog);

}  // namespace dynres
