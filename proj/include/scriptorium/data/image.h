// scriptorium/data/image.h

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

#ifndef SCRIPTORIUM_DATA_IMAGE_H_
#define SCRIPTORIUM_DATA_IMAGE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scriptorium/nnet/tensor.h"

namespace scriptorium {
namespace data {

// 8-bit grayscale, row-major, 0 = black ink, 255 = white paper.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;

  uint8_t at(int y, int x) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  bool operator==(const GrayImage&) const = default;
};

std::string EncodePng(const GrayImage& image);
GrayImage DecodePng(std::string_view bytes);  // converts any PNG to gray

// Throw IoError, or CorruptFile for undecodable contents.
void WritePng(const std::filesystem::path& path, const GrayImage& image);
GrayImage ReadPng(const std::filesystem::path& path);

// Bilinear resize to `height` rows, keeping the aspect ratio (width >= 8).
GrayImage ResizeToHeight(const GrayImage& image, int height);

// Recognizer input: [height, width] tensor of ink = 1 - gray / 255.
nnet::Tensor ToInk(const GrayImage& image);

}  // namespace data
}  // namespace scriptorium

#endif  // SCRIPTORIUM_DATA_IMAGE_H_
