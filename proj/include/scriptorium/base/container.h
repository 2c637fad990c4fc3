// scriptorium/base/container.h

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

#ifndef SCRIPTORIUM_BASE_CONTAINER_H_
#define SCRIPTORIUM_BASE_CONTAINER_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace scriptorium {

// Binary named-array container shared by checkpoints and language models.
//
// Layout, all integers little-endian:
//   "SCRP"  u32 version
//   repeated until end of file:
//     u32 name_length, name bytes (UTF-8)
//     u32 rank, u64 dims[rank]
//     f64 payload[prod(dims)]
inline constexpr uint32_t kContainerVersion = 1;

struct NamedArray {
  std::string name;
  std::vector<uint64_t> dims;
  std::vector<double> data;

  bool operator==(const NamedArray&) const = default;
};

std::string EncodeContainer(const std::vector<NamedArray>& records);
// Throws CorruptFile on bad magic, unsupported version, truncated records or
// payload lengths that disagree with dims.
std::vector<NamedArray> DecodeContainer(std::string_view bytes);

void WriteContainer(const std::filesystem::path& path, const std::vector<NamedArray>& records);
std::vector<NamedArray> ReadContainer(const std::filesystem::path& path);

// Throws CorruptFile if absent.
const NamedArray& FindRecord(const std::vector<NamedArray>& records, std::string_view name);

}  // namespace scriptorium

#endif  // SCRIPTORIUM_BASE_CONTAINER_H_
