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

#include "dynres/pixel_shuffle.hpp"

#include <string>
#include <utility>

#include "dynres/errors.hpp"

namespace dynres {

FeatureGrid::FeatureGrid(int height, int width, int channels)
    : height(height),
      width(width),
      channels(channels),
      values(static_cast<std::size_t>(height > 0 ? height : 0) *
             static_cast<std::size_t>(width > 0 ? width : 0) *
             static_cast<std::size_t>(channels > 0 ? channels : 0)) {}

FeatureGrid::FeatureGrid(int height, int width, int channels,
                         std::vector<double> values)
    : height(height), width(width), channels(channels), values(std::move(values)) {
  validate();
}

void FeatureGrid::validate() const {
  if (height < 1 || width < 1 || channels < 1) {
    throw Error(ErrorCode::kInvalidDimensions,
                "feature grid shape must be positive, got " +
                    std::to_string(height) + "x" + std::to_string(width) +
                    "x" + std::to_string(channels));
  }
  if (values.size() != positions() * static_cast<std::size_t>(channels)) {
    throw Error(ErrorCode::kInvalidDimensions,
                "feature grid holds " + std::to_string(values.size()) +
                    " values, shape needs " +
                    std::to_string(positions() * channels));
  }
}

PatchGrid patch_grid(int tile_size, int patch_size) {
  if (tile_size < 1 || patch_size < 1 || tile_size % patch_size != 0) {
    throw Error(ErrorCode::kNotDivisible,
                "patch size " + std::to_string(patch_size) +
                    " does not divide tile size " + std::to_string(tile_size));
  }
  const int n = tile_size / patch_size;
  return {n, n};
}

FeatureGrid unshuffle(const FeatureGrid& grid, int factor) {
  grid.validate();
  if (factor < 1 || grid.height % factor != 0 || grid.width % factor != 0) {
    throw Error(ErrorCode::kNotDivisible,
                "grid " + std::to_string(grid.height) + "x" +
                    std::to_string(grid.width) + " is not divisible by factor " +
                    std::to_string(factor));
  }
  const int f2 = factor * factor;
  FeatureGrid out(grid.height / factor, grid.width / factor, grid.channels * f2);
  for (int i = 0; i < out.height; ++i) {
    for (int j = 0; j < out.width; ++j) {
      for (int c = 0; c < grid.channels; ++c) {
        for (int di = 0; di < factor; ++di) {
          for (int dj = 0; dj < factor; ++dj) {
            out.at(i, j, c * f2 + di * factor + dj) =
                grid.at(i * factor + di, j * factor + dj, c);
          }
        }
      }
    }
  }
  return out;
}

FeatureGrid shuffle(const FeatureGrid& grid, int factor) {
  grid.validate();
  if (factor < 1 || grid.channels % (factor * factor) != 0) {
    throw Error(ErrorCode::kNotDivisible,
                "channels " + std::to_string(grid.channels) +
                    " not divisible by factor^2 for factor " +
                    std::to_string(factor));
  }
  const int f2 = factor * factor;
  FeatureGrid out(grid.height * factor, grid.width * factor, grid.channels / f2);
  for (int i = 0; i < grid.height; ++i) {
    for (int j = 0; j < grid.width; ++j) {
      for (int c = 0; c < out.channels; ++c) {
        for (int di = 0; di < factor; ++di) {
          for (int dj = 0; dj < factor; ++dj) {
            out.at(i * factor + di, j * factor + dj, c) =
                grid.at(i, j, c * f2 + di * factor + dj);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace dynres
