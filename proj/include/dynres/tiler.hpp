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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynres/ratio_catalog.hpp"
#include "dynres/tile_planner.hpp"

namespace dynres {

// Interleaved 8-bit raster, row-major, `channels` samples per pixel.
struct RasterImage {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> pixels;

  RasterImage() = default;
  RasterImage(int width, int height, int channels);
  RasterImage(int width, int height, int channels,
              std::vector<std::uint8_t> pixels);

  std::size_t row_stride() const {
    return static_cast<std::size_t>(width) * channels;
  }
  std::span<const std::uint8_t> row(int y) const {
    return {pixels.data() + y * row_stride(), row_stride()};
  }
  std::span<std::uint8_t> row(int y) {
    return {pixels.data() + y * row_stride(), row_stride()};
  }
  ImageDims dims() const { return {width, height}; }

  // Throws Error(kInvalidDimensions) when the buffer disagrees with the
  // header or channels is not 1, 3 or 4.
  void validate() const;

  friend bool operator==(const RasterImage&, const RasterImage&) = default;
};

struct TileSet {
  std::vector<RasterImage> tiles;  // row-major over plan.grid
  std::optional<RasterImage> thumbnail;
  TilePlan plan;
  std::string source_id;

  // Tiles followed by the thumbnail, which always comes last.
  std::vector<const RasterImage*> ordered() const;
};

/// Grayscale is replicated to three channels and alpha is dropped.
RasterImage to_rgb(const RasterImage& image);

/// Bilinear resample with half-pixel centers: destination pixel x samples
/// source coordinate (x + 0.5) * src_w / dst_w - 0.5, clamped to the edge.
/// Non-uniform scaling is allowed. Deterministic for identical inputs.
RasterImage resize(const RasterImage& image, int target_width,
                   int target_height);

/// Cuts an image of exactly (columns * tile_size) x (rows * tile_size) into
/// tiles, row-major. Pure copy, no resampling.
std::vector<RasterImage> slice(const RasterImage& image, RatioGrid grid,
                               int tile_size);

RasterImage thumbnail(const RasterImage& image, int tile_size);

/// Converts to RGB, resizes to the plan's target, slices, and adds the
/// thumbnail when the plan asks for one.
TileSet process(const RasterImage& image, const TilePlan& plan,
                const PlannerConfig& config, std::string source_id = {});

}  // namespace dynres
