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
#include <vector>

namespace dynres {

// H x W x C feature map, row-major with channels innermost.
struct FeatureGrid {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<double> values;

  FeatureGrid() = default;
  FeatureGrid(int height, int width, int channels);
  FeatureGrid(int height, int width, int channels, std::vector<double> values);

  std::size_t positions() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  double at(int y, int x, int c) const { return values[index(y, x, c)]; }
  double& at(int y, int x, int c) { return values[index(y, x, c)]; }

  void validate() const;

  friend bool operator==(const FeatureGrid&, const FeatureGrid&) = default;
};

struct PatchGrid {
  int rows = 0;
  int cols = 0;

  std::size_t positions() const {
    return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  }
  friend bool operator==(const PatchGrid&, const PatchGrid&) = default;
};

// Encoder patch grid for one tile. Throws Error(kNotDivisible).
PatchGrid patch_grid(int tile_size, int patch_size);

// Space-to-depth by `factor`:
//   out[i, j, c*f*f + di*f + dj] = in[i*f + di, j*f + dj, c]
// so the number of spatial positions drops by factor^2.
FeatureGrid unshuffle(const FeatureGrid& grid, int factor);

// Exact inverse of unshuffle.
FeatureGrid shuffle(const FeatureGrid& grid, int factor);

}  // namespace dynres
