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

#include "dynres/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <array>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <vector>

// jpeglib.h needs FILE and size_t declared first.
#include <jpeglib.h>

#include "dynres/errors.hpp"

namespace dynres {
namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool has_png_signature(const std::vector<std::uint8_t>& bytes) {
  static constexpr std::array<std::uint8_t, 8> kSig = {0x89, 'P', 'N', 'G',
                                                       '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= kSig.size() &&
         std::equal(kSig.begin(), kSig.end(), bytes.begin());
}

bool has_jpeg_signature(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8 &&
         bytes[2] == 0xff;
}

RasterImage decode_png(const std::vector<std::uint8_t>& bytes,
                       const std::string& name) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::kParse, name + ": " + img.message);
  }
  int channels = 3;
  if (img.format & PNG_FORMAT_FLAG_ALPHA) {
    img.format = PNG_FORMAT_RGBA;
    channels = 4;
  } else if (img.format & PNG_FORMAT_FLAG_COLOR) {
    img.format = PNG_FORMAT_RGB;
  } else {
    img.format = PNG_FORMAT_GRAY;
    channels = 1;
  }
  RasterImage out(static_cast<int>(img.width), static_cast<int>(img.height),
                  channels);
  if (!png_image_finish_read(&img, nullptr, out.pixels.data(), 0, nullptr)) {
    png_image_free(&img);
    throw Error(ErrorCode::kParse, name + ": " + img.message);
  }
  return out;
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  std::array<char, JMSG_LENGTH_MAX> message;
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message.data());
  std::longjmp(err->jump, 1);
}

// Everything that owns memory is declared before setjmp so longjmp never
// skips a destructor.
bool decode_jpeg_into(const std::vector<std::uint8_t>& bytes, RasterImage& out,
                      std::string& error) {
  jpeg_decompress_struct cinfo{};
  JpegErrorManager jerr{};
  cinfo.err = jpeg_std_error(&jerr.base);
  jerr.base.error_exit = jpeg_error_exit;
  if (setjmp(jerr.jump)) {
    jpeg_destroy_decompress(&cinfo);
    error = jerr.message.data();
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);
  out.width = static_cast<int>(cinfo.output_width);
  out.height = static_cast<int>(cinfo.output_height);
  out.channels = cinfo.output_components;
  out.pixels.resize(out.row_stride() * out.height);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = out.pixels.data() + cinfo.output_scanline * out.row_stride();
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

}  // namespace

bool is_supported_image(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

RasterImage read_image(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  if (has_png_signature(bytes)) {
    return decode_png(bytes, path.string());
  }
  if (has_jpeg_signature(bytes)) {
    RasterImage out;
    std::string error;
    if (!decode_jpeg_into(bytes, out, error)) {
      throw Error(ErrorCode::kParse, path.string() + ": " + error);
    }
    out.validate();
    return out;
  }
  throw Error(ErrorCode::kParse, path.string() + ": not a PNG or JPEG file");
}

void write_png(const std::filesystem::path& path, const RasterImage& image) {
  image.validate();
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = image.channels == 1   ? PNG_FORMAT_GRAY
               : image.channels == 4 ? PNG_FORMAT_RGBA
                                     : PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&img, path.string().c_str(), 0,
                               image.pixels.data(), 0, nullptr)) {
    throw Error(ErrorCode::kIo, path.string() + ": " + img.message);
  }
}

}  // namespace dynres
