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

#include "dynres/tiler.hpp"

#include <algorithm>
#include <cstring>
#include <string>
#include <utility>

#include "dynres/errors.hpp"

namespace dynres {
namespace {

// Interpolation weights are fixed point so resampling is bit-identical on
// every platform regardless of floating-point contraction settings.
constexpr int kWeightBits = 11;
constexpr std::uint32_t kWeightOne = 1u << kWeightBits;

struct Tap {
  int lo;
  int hi;
  std::uint32_t w_hi;  // weight of `hi`, in units of 1 / kWeightOne
};

// Source taps for each destination index along one axis. The half-pixel
// source coordinate ((2i + 1) * src - dst) / (2 * dst) is kept rational so
// identity and exact-multiple scales produce zero fractional weights.
std::vector<Tap> make_taps(int src, int dst) {
  std::vector<Tap> taps(static_cast<std::size_t>(dst));
  const std::int64_t den = 2 * static_cast<std::int64_t>(dst);
  for (int i = 0; i < dst; ++i) {
    const std::int64_t num = (2 * static_cast<std::int64_t>(i) + 1) * src - dst;
    Tap t{0, 0, 0};
    if (num > 0) {
      const std::int64_t lo = num / den;
      const std::int64_t rem = num - lo * den;
      t.lo = static_cast<int>(lo);
      t.w_hi = static_cast<std::uint32_t>((rem * 2 * kWeightOne + den) / (2 * den));
    }
    if (t.lo >= src - 1) {
      t.lo = src - 1;
      t.w_hi = 0;
    }
    t.hi = std::min(t.lo + 1, src - 1);
    taps[static_cast<std::size_t>(i)] = t;
  }
  return taps;
}

void resample_row(std::span<const std::uint8_t> src, int channels,
                  const std::vector<Tap>& taps, std::vector<std::uint32_t>& out) {
  std::size_t o = 0;
  for (const Tap& t : taps) {
    const std::uint8_t* lo = src.data() + static_cast<std::size_t>(t.lo) * channels;
    const std::uint8_t* hi = src.data() + static_cast<std::size_t>(t.hi) * channels;
    const std::uint32_t w_lo = kWeightOne - t.w_hi;
    for (int c = 0; c < channels; ++c) {
      out[o++] = lo[c] * w_lo + hi[c] * t.w_hi;
    }
  }
}

}  // namespace

RasterImage::RasterImage(int width, int height, int channels)
    : width(width),
      height(height),
      channels(channels),
      pixels(static_cast<std::size_t>(std::max(width, 0)) *
             static_cast<std::size_t>(std::max(height, 0)) *
             static_cast<std::size_t>(std::max(channels, 0))) {}

RasterImage::RasterImage(int width, int height, int channels,
                         std::vector<std::uint8_t> pixels)
    : width(width), height(height), channels(channels), pixels(std::move(pixels)) {
  validate();
}

void RasterImage::validate() const {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidDimensions,
                "raster dimensions must be positive, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  if (channels != 1 && channels != 3 && channels != 4) {
    throw Error(ErrorCode::kInvalidDimensions,
                "unsupported channel count " + std::to_string(channels));
  }
  const std::size_t expected = static_cast<std::size_t>(width) *
                               static_cast<std::size_t>(height) *
                               static_cast<std::size_t>(channels);
  if (pixels.size() != expected) {
    throw Error(ErrorCode::kInvalidDimensions,
                "pixel buffer holds " + std::to_string(pixels.size()) +
                    " samples, expected " + std::to_string(expected));
  }
}

std::vector<const RasterImage*> TileSet::ordered() const {
  std::vector<const RasterImage*> out;
  out.reserve(tiles.size() + 1);
  for (const auto& t : tiles) out.push_back(&t);
  if (thumbnail) out.push_back(&*thumbnail);
  return out;
}

RasterImage to_rgb(const RasterImage& image) {
  image.validate();
  if (image.channels == 3) return image;
  RasterImage out(image.width, image.height, 3);
  const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
  const std::uint8_t* src = image.pixels.data();
  std::uint8_t* dst = out.pixels.data();
  for (std::size_t i = 0; i < n; ++i) {
    if (image.channels == 1) {
      dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
    } else {
      std::memcpy(dst + 3 * i, src + 4 * i, 3);
    }
  }
  return out;
}

RasterImage resize(const RasterImage& image, int target_width,
                   int target_height) {
  if (target_width < 1 || target_height < 1) {
    throw Error(ErrorCode::kInvalidTarget,
                "resize target must be positive, got " +
                    std::to_string(target_width) + "x" +
                    std::to_string(target_height));
  }
  image.validate();
  if (target_width == image.width && target_height == image.height) {
    return image;
  }

  const int ch = image.channels;
  const auto x_taps = make_taps(image.width, target_width);
  const auto y_taps = make_taps(image.height, target_height);
  RasterImage out(target_width, target_height, ch);

  // Two horizontally resampled source rows, reused while consecutive
  // destination rows share them.
  const std::size_t row_len = static_cast<std::size_t>(target_width) * ch;
  std::vector<std::uint32_t> row_a(row_len), row_b(row_len);
  int cached_a = -1, cached_b = -1;

  constexpr std::uint32_t kRound = 1u << (2 * kWeightBits - 1);
  for (int y = 0; y < target_height; ++y) {
    const Tap& t = y_taps[static_cast<std::size_t>(y)];
    if (cached_a != t.lo) {
      if (cached_b == t.lo) {
        std::swap(row_a, row_b);
        std::swap(cached_a, cached_b);
      } else {
        resample_row(image.row(t.lo), ch, x_taps, row_a);
        cached_a = t.lo;
      }
    }
    if (cached_b != t.hi) {
      resample_row(image.row(t.hi), ch, x_taps, row_b);
      cached_b = t.hi;
    }
    const std::uint32_t w_lo = kWeightOne - t.w_hi;
    std::uint8_t* dst = out.row(y).data();
    for (std::size_t i = 0; i < row_len; ++i) {
      const std::uint32_t v = row_a[i] * w_lo + row_b[i] * t.w_hi;
      dst[i] = static_cast<std::uint8_t>((v + kRound) >> (2 * kWeightBits));
    }
  }
  return out;
}

std::vector<RasterImage> slice(const RasterImage& image, RatioGrid grid,
                               int tile_size) {
  image.validate();
  if (tile_size < 1 || grid.columns < 1 || grid.rows < 1) {
    throw Error(ErrorCode::kDimensionMismatch, "grid and tile size must be positive");
  }
  if (static_cast<std::int64_t>(grid.columns) * tile_size != image.width ||
      static_cast<std::int64_t>(grid.rows) * tile_size != image.height) {
    throw Error(ErrorCode::kDimensionMismatch,
                "image " + std::to_string(image.width) + "x" +
                    std::to_string(image.height) + " is not a " +
                    std::to_string(grid.columns) + "x" +
                    std::to_string(grid.rows) + " grid of " +
                    std::to_string(tile_size) + "px tiles");
  }
  const int ch = image.channels;
  const std::size_t tile_stride = static_cast<std::size_t>(tile_size) * ch;
  std::vector<RasterImage> tiles;
  tiles.reserve(static_cast<std::size_t>(grid.tiles()));
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.columns; ++c) {
      RasterImage tile(tile_size, tile_size, ch);
      for (int y = 0; y < tile_size; ++y) {
        const auto src = image.row(r * tile_size + y);
        std::memcpy(tile.row(y).data(), src.data() + c * tile_stride, tile_stride);
      }
      tiles.push_back(std::move(tile));
    }
  }
  return tiles;
}

RasterImage thumbnail(const RasterImage& image, int tile_size) {
  return resize(image, tile_size, tile_size);
}

TileSet process(const RasterImage& image, const TilePlan& plan,
                const PlannerConfig& config, std::string source_id) {
  const RasterImage rgb = to_rgb(image);
  TileSet set;
  set.plan = plan;
  set.source_id = std::move(source_id);
  set.tiles = slice(resize(rgb, plan.resize_width, plan.resize_height),
                    plan.grid, config.tile_size);
  if (plan.include_thumbnail) {
    set.thumbnail = thumbnail(rgb, config.tile_size);
  }
  return set;
}

}  // namespace dynres
