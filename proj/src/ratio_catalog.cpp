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

#include "dynres/ratio_catalog.hpp"

#include <string>

#include "dynres/errors.hpp"

namespace dynres {

RatioCatalog build_catalog(int min_tiles, int max_tiles) {
  if (min_tiles < 1 || min_tiles > max_tiles) {
    throw Error(ErrorCode::kInvalidRange,
                "tile range [" + std::to_string(min_tiles) + ", " +
                    std::to_string(max_tiles) + "] is empty or non-positive");
  }
  std::vector<RatioGrid> entries;
  // Walking tile counts outward and columns upward yields canonical order
  // directly; no sort needed.
  for (int n = min_tiles; n <= max_tiles; ++n) {
    for (int columns = 1; columns <= n; ++columns) {
      if (n % columns == 0) {
        entries.push_back({columns, n / columns});
      }
    }
  }
  return RatioCatalog(min_tiles, max_tiles, std::move(entries));
}

std::size_t catalog_len(const RatioCatalog& catalog) { return catalog.size(); }

}  // namespace dynres
