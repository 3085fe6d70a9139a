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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dynres/cli.hpp"
#include "dynres/dataset_mixture.hpp"
#include "dynres/errors.hpp"
#include "dynres/pixel_shuffle.hpp"
#include "dynres/ratio_catalog.hpp"
#include "dynres/serialization.hpp"
#include "dynres/tile_planner.hpp"
#include "dynres/tiler.hpp"
#include "dynres/translation.hpp"

namespace py = pybind11;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

dynres::RasterImage to_raster(const U8Array& arr) {
  if (arr.ndim() != 2 && arr.ndim() != 3) {
    throw py::value_error("image must be HxW or HxWxC");
  }
  const int h = static_cast<int>(arr.shape(0));
  const int w = static_cast<int>(arr.shape(1));
  const int c = arr.ndim() == 3 ? static_cast<int>(arr.shape(2)) : 1;
  std::vector<std::uint8_t> px(arr.data(), arr.data() + arr.size());
  return dynres::RasterImage(w, h, c, std::move(px));
}

U8Array to_array(const dynres::RasterImage& img) {
  U8Array out({img.height, img.width, img.channels});
  std::copy(img.pixels.begin(), img.pixels.end(), out.mutable_data());
  return out;
}

dynres::FeatureGrid to_grid(const F64Array& arr) {
  if (arr.ndim() != 3) throw py::value_error("feature grid must be HxWxC");
  std::vector<double> v(arr.data(), arr.data() + arr.size());
  return dynres::FeatureGrid(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)),
                             static_cast<int>(arr.shape(2)), std::move(v));
}

F64Array from_grid(const dynres::FeatureGrid& g) {
  F64Array out({g.height, g.width, g.channels});
  std::copy(g.values.begin(), g.values.end(), out.mutable_data());
  return out;
}

py::dict record_to_dict(const dynres::ManifestRecord& r) {
  py::dict d;
  d["sample_id"] = r.sample_id;
  d["path"] = r.path;
  d["task"] = std::string(dynres::to_string(r.task));
  d["language"] = std::string(dynres::to_string(r.language));
  d["dataset_name"] = r.dataset_name;
  return d;
}

dynres::ManifestRecord record_from_dict(const py::dict& d) {
  nlohmann::json j;
  for (const char* key : {"sample_id", "path", "task", "language", "dataset_name"}) {
    if (d.contains(key)) j[key] = py::str(d[key]).cast<std::string>();
  }
  return dynres::record_from_json(j);
}

py::dict plan_to_dict(const dynres::TilePlan& p) {
  py::dict d;
  d["grid_columns"] = p.grid.columns;
  d["grid_rows"] = p.grid.rows;
  d["resize_width"] = p.resize_width;
  d["resize_height"] = p.resize_height;
  d["tile_count"] = p.tile_count;
  d["include_thumbnail"] = p.include_thumbnail;
  d["visual_tokens"] = p.visual_tokens;
  return d;
}

}  // namespace

PYBIND11_MODULE(_dynres, m) {
  m.doc() = "Dynamic-resolution preprocessing core";
  m.attr("__version__") = DYNRES_VERSION_STRING;

  py::register_exception<dynres::Error>(m, "DynresError", PyExc_ValueError);

  py::class_<dynres::RatioGrid>(m, "RatioGrid")
      .def(py::init<int, int>(), py::arg("columns"), py::arg("rows"))
      .def_readonly("columns", &dynres::RatioGrid::columns)
      .def_readonly("rows", &dynres::RatioGrid::rows)
      .def_property_readonly("tiles", &dynres::RatioGrid::tiles)
      .def("__eq__", [](const dynres::RatioGrid& a, const dynres::RatioGrid& b) { return a == b; })
      .def("__iter__", [](const dynres::RatioGrid& g) {
        return py::iter(py::make_tuple(g.columns, g.rows));
      })
      .def("__repr__", [](const dynres::RatioGrid& g) {
        return "RatioGrid(" + std::to_string(g.columns) + ", " + std::to_string(g.rows) + ")";
      });

  py::class_<dynres::PlannerConfig>(m, "PlannerConfig")
      .def(py::init([](int tile_size, int min_tiles, int max_tiles, int tokens_per_tile,
                       bool use_thumbnail) {
             dynres::PlannerConfig c{tile_size, min_tiles, max_tiles, tokens_per_tile,
                                     use_thumbnail};
             c.validate();
             return c;
           }),
           py::arg("tile_size") = 448, py::arg("min_tiles") = 1, py::arg("max_tiles") = 12,
           py::arg("tokens_per_tile") = 256, py::arg("use_thumbnail") = true)
      .def_readwrite("tile_size", &dynres::PlannerConfig::tile_size)
      .def_readwrite("min_tiles", &dynres::PlannerConfig::min_tiles)
      .def_readwrite("max_tiles", &dynres::PlannerConfig::max_tiles)
      .def_readwrite("tokens_per_tile", &dynres::PlannerConfig::tokens_per_tile)
      .def_readwrite("use_thumbnail", &dynres::PlannerConfig::use_thumbnail);

  py::class_<dynres::TilePlan>(m, "TilePlan")
      .def_readonly("grid", &dynres::TilePlan::grid)
      .def_readonly("resize_width", &dynres::TilePlan::resize_width)
      .def_readonly("resize_height", &dynres::TilePlan::resize_height)
      .def_readonly("tile_count", &dynres::TilePlan::tile_count)
      .def_readonly("include_thumbnail", &dynres::TilePlan::include_thumbnail)
      .def_readonly("visual_tokens", &dynres::TilePlan::visual_tokens)
      .def("to_dict", &plan_to_dict);

  m.def("build_catalog",
        [](int min_tiles, int max_tiles) {
          const auto c = dynres::build_catalog(min_tiles, max_tiles);
          return std::vector<dynres::RatioGrid>(c.begin(), c.end());
        },
        py::arg("min_tiles") = 1, py::arg("max_tiles") = 12);

  m.def("closest_ratio",
        [](std::int64_t w, std::int64_t h, const dynres::PlannerConfig& cfg) {
          return dynres::closest_ratio(
              {w, h}, dynres::build_catalog(cfg.min_tiles, cfg.max_tiles), cfg);
        },
        py::arg("width"), py::arg("height"), py::arg("config") = dynres::PlannerConfig{});

  m.def("plan",
        [](std::int64_t w, std::int64_t h, const dynres::PlannerConfig& cfg) {
          return dynres::plan({w, h}, cfg);
        },
        py::arg("width"), py::arg("height"), py::arg("config") = dynres::PlannerConfig{});

  m.def("token_bounds",
        [](const dynres::PlannerConfig& cfg) {
          const auto b = dynres::token_bounds(cfg);
          return py::make_tuple(b.min_tokens, b.max_tokens);
        },
        py::arg("config") = dynres::PlannerConfig{});

  m.def("resize",
        [](const U8Array& img, int w, int h) {
          return to_array(dynres::resize(to_raster(img), w, h));
        },
        py::arg("image"), py::arg("width"), py::arg("height"));

  m.def("process",
        [](const U8Array& img, const dynres::PlannerConfig& cfg) {
          const auto raster = to_raster(img);
          const auto p = dynres::plan(raster.dims(), cfg);
          dynres::TileSet set;
          {
            py::gil_scoped_release release;
            set = dynres::process(raster, p, cfg);
          }
          py::list tiles;
          for (const auto& t : set.tiles) tiles.append(to_array(t));
          py::dict out;
          out["plan"] = p;
          out["tiles"] = tiles;
          out["thumbnail"] = set.thumbnail ? py::object(to_array(*set.thumbnail)) : py::none();
          return out;
        },
        py::arg("image"), py::arg("config") = dynres::PlannerConfig{},
        "Plan, resize, slice and thumbnail an HxWxC uint8 image.");

  m.def("patch_grid",
        [](int tile_size, int patch_size) {
          const auto g = dynres::patch_grid(tile_size, patch_size);
          return py::make_tuple(g.rows, g.cols);
        },
        py::arg("tile_size") = 448, py::arg("patch_size") = 14);

  m.def("unshuffle",
        [](const F64Array& a, int factor) { return from_grid(dynres::unshuffle(to_grid(a), factor)); },
        py::arg("grid"), py::arg("factor") = 2);
  m.def("shuffle",
        [](const F64Array& a, int factor) { return from_grid(dynres::shuffle(to_grid(a), factor)); },
        py::arg("grid"), py::arg("factor") = 2);

  m.def("prompt_template_version", [] { return std::string(dynres::prompt_template_version()); });
  m.def("render_prompt",
        [](const std::string& language, const std::string& text) {
          const auto p = dynres::render_prompt(language, text);
          py::dict d;
          d["system"] = p.system_text;
          d["user"] = p.user_text;
          d["target_language"] = p.target_language;
          return d;
        },
        py::arg("target_language"), py::arg("text"));
  m.def("cache_key",
        [](const std::string& language, const std::string& text, const std::string& version) {
          return dynres::cache_key(language, text, version);
        },
        py::arg("target_language"), py::arg("text"),
        py::arg("template_version") = std::string(dynres::prompt_template_version()));

  m.def("load_manifest", [](const std::string& path) {
    py::list out;
    for (const auto& r : dynres::load_manifest(path)) out.append(record_to_dict(r));
    return out;
  });

  m.def("sample",
        [](const py::list& records, py::object spec, std::size_t n, std::uint64_t seed) {
          std::vector<dynres::ManifestRecord> recs;
          for (const auto& r : records) recs.push_back(record_from_dict(r.cast<py::dict>()));
          dynres::MixtureSpec mix = dynres::MixtureSpec::pretrain_default();
          if (!spec.is_none()) {
            nlohmann::json j = nlohmann::json::object();
            for (const auto& [k, v] : spec.cast<py::dict>()) {
              j[k.cast<std::string>()] = v.cast<double>();
            }
            mix = dynres::MixtureSpec::from_json(j);
          }
          py::list out;
          for (const auto& r : dynres::sample(recs, mix, n, seed)) out.append(record_to_dict(r));
          return out;
        },
        py::arg("records"), py::arg("spec") = py::none(), py::arg("n"), py::arg("seed") = 0,
        "Bucket-first weighted sample; spec maps task name to weight "
        "(None = pre-training default).");

  m.def("mixture_report", [](const py::list& records) {
    std::vector<dynres::ManifestRecord> recs;
    for (const auto& r : records) recs.push_back(record_from_dict(r.cast<py::dict>()));
    py::dict out;
    for (const auto& [task, s] : dynres::mixture_report(recs)) {
      out[py::str(std::string(dynres::to_string(task)))] = py::make_tuple(s.count, s.fraction);
    }
    return out;
  });

  m.def("run_cli",
        [](std::vector<std::string> args) {
          args.insert(args.begin(), "dynres");
          std::ostringstream out, err;
          const int code = dynres::cli::run(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the CLI in-process; returns (exit_code, stdout, stderr).");
}
