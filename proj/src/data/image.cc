// src/data/image.cc

// Copyright 2026  Scriptorium Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "scriptorium/data/image.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <png.h>

#include "scriptorium/base/error.h"
#include "scriptorium/base/file-io.h"

namespace scriptorium {
namespace data {

std::string EncodePng(const GrayImage& image) {
  if (image.width <= 0 || image.height <= 0 ||
      image.pixels.size() != static_cast<std::size_t>(image.width) * image.height)
    throw BadShape("image pixel count does not match its size");
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, image.pixels.data(), 0, nullptr))
    throw IoError(std::string("png encode failed: ") + png.message);
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, image.pixels.data(), 0, nullptr))
    throw IoError(std::string("png encode failed: ") + png.message);
  out.resize(size);
  return out;
}

GrayImage DecodePng(std::string_view bytes) {
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size()))
    throw CorruptFile(std::string("not a PNG image: ") + png.message);
  png.format = PNG_FORMAT_GRAY;
  GrayImage img;
  img.width = static_cast<int>(png.width);
  img.height = static_cast<int>(png.height);
  img.pixels.resize(PNG_IMAGE_SIZE(png));
  // Transparent areas composite onto white paper.
  png_color white{255, 255, 255};
  if (!png_image_finish_read(&png, &white, img.pixels.data(), 0, nullptr)) {
    png_image_free(&png);
    throw CorruptFile(std::string("corrupt PNG image: ") + png.message);
  }
  return img;
}

void WritePng(const std::filesystem::path& path, const GrayImage& image) {
  WriteFileAtomic(path, EncodePng(image));
}

GrayImage ReadPng(const std::filesystem::path& path) {
  try {
    return DecodePng(ReadFile(path));
  } catch (const CorruptFile& e) {
    throw CorruptFile(path.string() + ": " + e.what());
  }
}

GrayImage ResizeToHeight(const GrayImage& image, int height) {
  if (image.height == height) return image;
  const double scale = static_cast<double>(height) / image.height;
  GrayImage out;
  out.height = height;
  out.width = std::max(8, static_cast<int>(std::lround(image.width * scale)));
  out.pixels.resize(static_cast<std::size_t>(out.width) * height);
  const double sx = static_cast<double>(image.width) / out.width;
  const double sy = static_cast<double>(image.height) / height;
  for (int y = 0; y < height; ++y) {
    double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, image.height - 1.0);
    int y0 = static_cast<int>(fy), y1 = std::min(y0 + 1, image.height - 1);
    double wy = fy - y0;
    for (int x = 0; x < out.width; ++x) {
      double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, image.width - 1.0);
      int x0 = static_cast<int>(fx), x1 = std::min(x0 + 1, image.width - 1);
      double wx = fx - x0;
      double v = (1 - wy) * ((1 - wx) * image.at(y0, x0) + wx * image.at(y0, x1)) +
                 wy * ((1 - wx) * image.at(y1, x0) + wx * image.at(y1, x1));
      out.pixels[static_cast<std::size_t>(y) * out.width + x] =
          static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
    }
  }
  return out;
}

nnet::Tensor ToInk(const GrayImage& image) {
  nnet::Tensor t({image.height, image.width});
  for (std::size_t i = 0; i < image.pixels.size(); ++i) t[i] = 1.0 - image.pixels[i] / 255.0;
  return t;
}

}  // namespace data
}  // namespace scriptorium
