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

#include <filesystem>
#include <string>

#include "dynres/tiler.hpp"

namespace dynres {

// PNG or JPEG, detected from the file signature. Throws Error(kIo) when the
// file cannot be read and Error(kParse) when it cannot be decoded.
RasterImage read_image(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const RasterImage& image);

bool is_supported_image(const std::filesystem::path& path);

}  // namespace dynres
