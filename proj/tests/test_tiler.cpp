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

#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <jpeglib.h>
#include <nlohmann/json.hpp>

#include "dynres/batch.hpp"
#include "dynres/errors.hpp"
#include "dynres/image_io.hpp"
#include "dynres/tiler.hpp"
#include "test_helpers.hpp"

using namespace dynres;
using dynres::testing::constant_image;
using dynres::testing::random_image;
using dynres::testing::TempDir;

namespace {

bool all_equal(const RasterImage& img, std::uint8_t v) {
  return std::all_of(img.pixels.begin(), img.pixels.end(), [v](auto p) { return p == v; });
}

RasterImage reassemble(const std::vector<RasterImage>& tiles, RatioGrid grid, int tile) {
  const int ch = tiles.front().channels;
  RasterImage out(grid.columns * tile, grid.rows * tile, ch);
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.columns; ++c) {
      const auto& t = tiles[static_cast<std::size_t>(r * grid.columns + c)];
      for (int y = 0; y < tile; ++y) {
        for (int x = 0; x < tile * ch; ++x) {
          out.row(r * tile + y)[static_cast<std::size_t>(c * tile * ch + x)] =
              t.row(y)[static_cast<std::size_t>(x)];
        }
      }
    }
  }
  return out;
}

void write_test_jpeg(const std::filesystem::path& path, const RasterImage& img) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  REQUIRE(f != nullptr);
  jpeg_compress_struct cinfo{};
  jpeg_error_mgr jerr{};
  cinfo.err = jpeg_std_error(&jerr);
  jpeg_create_compress(&cinfo);
  jpeg_stdio_dest(&cinfo, f);
  cinfo.image_width = static_cast<JDIMENSION>(img.width);
  cinfo.image_height = static_cast<JDIMENSION>(img.height);
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<std::uint8_t*>(img.row(static_cast<int>(cinfo.next_scanline)).data());
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  std::fclose(f);
}

}  // namespace

TEST_CASE("resize hits the requested dimensions") {
  const auto img = random_image(800, 1300, 3, 1);
  const auto out = resize(img, 896, 1344);
  CHECK(out.width == 896);
  CHECK(out.height == 1344);
  CHECK(out.channels == 3);
  CHECK(out.pixels.size() == 896u * 1344u * 3u);
}

TEST_CASE("identity resize is pixel exact") {
  const auto img = random_image(448, 448, 3, 2);
  CHECK(resize(img, 448, 448) == img);
}

TEST_CASE("resizing a constant field stays constant") {
  CHECK(all_equal(resize(constant_image(2, 2, 1, 77), 4, 4), 77));
  CHECK(all_equal(resize(constant_image(2, 2, 3, 200), 4, 4), 200));
  CHECK(all_equal(resize(constant_image(31, 17, 3, 9), 448, 448), 9));
  CHECK(all_equal(resize(constant_image(1920, 1080, 3, 255), 1792, 896), 255));
}

TEST_CASE("bilinear with half-pixel centres on a 2x1 ramp") {
  // Source [0, 200] upscaled to 4: centres map to -0.25, 0.25, 0.75, 1.25,
  // giving 0, 50, 150, 200 after edge clamping.
  RasterImage src(2, 1, 1, {0, 200});
  const auto out = resize(src, 4, 1);
  CHECK(out.pixels == std::vector<std::uint8_t>{0, 50, 150, 200});
  // 2x downscale averages pairs.
  RasterImage wide(4, 1, 1, {10, 30, 100, 200});
  CHECK(resize(wide, 2, 1).pixels == std::vector<std::uint8_t>{20, 150});
}

TEST_CASE("resize is deterministic") {
  const auto img = random_image(333, 211, 3, 3);
  CHECK(resize(img, 448, 896) == resize(img, 448, 896));
}

TEST_CASE("resize rejects zero targets") {
  const auto img = random_image(4, 4, 3, 4);
  try {
    (void)resize(img, 0, 4);
    FAIL("expected invalid-target error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidTarget);
  }
}

TEST_CASE("slice produces row-major tiles") {
  const auto img = random_image(896, 1344, 3, 5);
  const auto tiles = slice(img, {2, 3}, 448);
  REQUIRE(tiles.size() == 6);
  for (const auto& t : tiles) {
    CHECK(t.width == 448);
    CHECK(t.height == 448);
  }
  // Tile (row 1, col 1) starts at pixel (448, 448).
  CHECK(tiles[3].row(0)[0] == img.row(448)[448 * 3]);
  CHECK(reassemble(tiles, {2, 3}, 448) == img);
}

TEST_CASE("single-tile slice is the input") {
  const auto img = random_image(64, 64, 3, 6);
  const auto tiles = slice(img, {1, 1}, 64);
  REQUIRE(tiles.size() == 1);
  CHECK(tiles[0] == img);
}

TEST_CASE("4x4 distinct pixels reassemble exactly from 2x2 tiles") {
  RasterImage img(4, 4, 1);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>(i);
  const auto tiles = slice(img, {2, 2}, 2);
  REQUIRE(tiles.size() == 4);
  CHECK(tiles[0].pixels == std::vector<std::uint8_t>{0, 1, 4, 5});
  CHECK(tiles[1].pixels == std::vector<std::uint8_t>{2, 3, 6, 7});
  CHECK(tiles[2].pixels == std::vector<std::uint8_t>{8, 9, 12, 13});
  CHECK(tiles[3].pixels == std::vector<std::uint8_t>{10, 11, 14, 15});
  CHECK(reassemble(tiles, {2, 2}, 2) == img);
}

TEST_CASE("slice rejects mismatched dimensions") {
  const auto img = random_image(900, 1344, 3, 7);
  try {
    (void)slice(img, {2, 3}, 448);
    FAIL("expected dimension mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
}

TEST_CASE("thumbnail") {
  CHECK(thumbnail(random_image(896, 1344, 3, 8), 448).width == 448);
  const auto square = random_image(448, 448, 3, 9);
  CHECK(thumbnail(square, 448) == square);
  CHECK(all_equal(thumbnail(constant_image(1000, 300, 3, 42), 448), 42));
}

TEST_CASE("channel conversion") {
  RasterImage gray(1, 1, 1, {9});
  CHECK(to_rgb(gray).pixels == std::vector<std::uint8_t>{9, 9, 9});
  RasterImage rgba(1, 1, 4, {1, 2, 3, 4});
  CHECK(to_rgb(rgba).pixels == std::vector<std::uint8_t>{1, 2, 3});
  CHECK_THROWS_AS(RasterImage(2, 2, 2, std::vector<std::uint8_t>(8)), Error);
  CHECK_THROWS_AS(RasterImage(2, 2, 3, std::vector<std::uint8_t>(5)), Error);
}

TEST_CASE("process: 800x1300 yields six tiles plus a thumbnail") {
  const PlannerConfig cfg;
  const auto img = random_image(800, 1300, 3, 10);
  const auto p = plan(img.dims(), cfg);
  const auto set = process(img, p, cfg, "sample");
  CHECK(set.tiles.size() == 6);
  REQUIRE(set.thumbnail.has_value());
  CHECK(set.ordered().size() == 7);
  CHECK(set.ordered().back() == &*set.thumbnail);
  CHECK(set.source_id == "sample");
  for (const auto* t : set.ordered()) {
    CHECK(t->width == 448);
    CHECK(t->height == 448);
  }
}

TEST_CASE("process: single tile, no thumbnail") {
  const PlannerConfig cfg;
  const auto img = random_image(448, 448, 4, 11);
  const auto set = process(img, plan(img.dims(), cfg), cfg);
  CHECK(set.tiles.size() == 1);
  CHECK_FALSE(set.thumbnail.has_value());
  CHECK(set.tiles[0].channels == 3);
}

TEST_CASE("process: 2000x2000 yields nine tiles plus thumbnail, 2560 tokens") {
  const PlannerConfig cfg;
  const auto img = constant_image(2000, 2000, 1, 128);
  const auto p = plan(img.dims(), cfg);
  const auto set = process(img, p, cfg);
  CHECK(set.tiles.size() == 9);
  CHECK(set.thumbnail.has_value());
  CHECK(p.visual_tokens == 2560);
  const auto images = set.tiles.size() + (set.thumbnail ? 1u : 0u);
  CHECK(images == static_cast<std::size_t>(p.visual_tokens / cfg.tokens_per_tile));
}

TEST_CASE("png round trip and tileset output naming") {
  TempDir dir("tiler");
  const auto img = random_image(37, 23, 3, 12);
  write_png(dir.path() / "a.png", img);
  CHECK(read_image(dir.path() / "a.png") == img);

  RasterImage gray(5, 3, 1);
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) gray.pixels[i] = static_cast<std::uint8_t>(i * 7);
  write_png(dir.path() / "g.png", gray);
  CHECK(read_image(dir.path() / "g.png") == gray);

  const PlannerConfig cfg;
  const auto big = random_image(800, 1300, 3, 13);
  const auto set = process(big, plan(big.dims(), cfg), cfg, "img");
  const auto files = write_tileset(set, dir.path() / "out");
  REQUIRE(files.size() == 8);
  CHECK(files[0].filename() == "img_tile_0_0.png");
  CHECK(files[1].filename() == "img_tile_0_1.png");
  CHECK(files[5].filename() == "img_tile_2_1.png");
  CHECK(files[6].filename() == "img_thumb.png");
  CHECK(files[7].filename() == "img.json");
  CHECK(read_image(files[5]) == set.tiles[5]);

  std::ifstream in(files[7]);
  const auto meta = nlohmann::json::parse(in);
  CHECK(meta["plan"]["resize_width"] == 896);
  CHECK(meta["plan"]["visual_tokens"] == 1792);
  CHECK(meta["files"].size() == 7);
}

TEST_CASE("jpeg decoding") {
  TempDir dir("jpeg");
  const auto img = constant_image(40, 30, 3, 128);
  write_test_jpeg(dir.path() / "c.jpg", img);
  const auto back = read_image(dir.path() / "c.jpg");
  CHECK(back.width == 40);
  CHECK(back.height == 30);
  CHECK(back.channels == 3);
  for (auto p : back.pixels) CHECK(std::abs(int(p) - 128) <= 2);
}

TEST_CASE("image reading errors") {
  TempDir dir("bad");
  try {
    (void)read_image(dir.path() / "missing.png");
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
  }
  {
    std::ofstream(dir.path() / "junk.png") << "not an image";
  }
  try {
    (void)read_image(dir.path() / "junk.png");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
  }
  {
    std::ofstream f(dir.path() / "trunc.jpg", std::ios::binary);
    f << "\xff\xd8\xff\xe0" << "garbage";
  }
  CHECK_THROWS_AS(read_image(dir.path() / "trunc.jpg"), Error);
}

TEST_CASE("batch tiling collects per-image failures") {
  TempDir dir("batch");
  for (int i = 0; i < 6; ++i) {
    write_png(dir.path() / ("in_" + std::to_string(i) + ".png"),
              random_image(100 + 37 * i, 90 + 11 * i, 3, 100 + i));
  }
  { std::ofstream(dir.path() / "broken.png") << "x"; }
  const auto inputs = collect_images(dir.path());
  CHECK(inputs.size() == 7);
  const auto report = tile_files(inputs, dir.path() / "out", PlannerConfig{}, 3);
  CHECK(report.processed == 6);
  REQUIRE(report.failures.size() == 1);
  CHECK(report.failures[0].input.filename() == "broken.png");
  CHECK(std::filesystem::exists(dir.path() / "out" / "in_0.json"));
}

TEST_CASE("parallel_for visits each index once and propagates errors") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](std::size_t i) {
                                 if (i == 7) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}
