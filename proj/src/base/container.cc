// src/base/container.cc

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

#include "scriptorium/base/container.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "scriptorium/base/error.h"

namespace scriptorium {

namespace {

constexpr char kMagic[4] = {'S', 'C', 'R', 'P'};

template <typename T>
void PutLe(std::string& out, T v) {
  uint8_t bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  bool done() const { return pos_ == bytes_.size(); }

  template <typename T>
  T Get(const char* what) {
    Need(sizeof(T), what);
    uint8_t bytes[sizeof(T)];
    std::memcpy(bytes, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
      for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
        std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    T v;
    std::memcpy(&v, bytes, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::string_view Take(std::size_t n, const char* what) {
    Need(n, what);
    std::string_view s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  void Need(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n)
      throw CorruptFile(std::string("truncated container while reading ") + what +
                        " at offset " + std::to_string(pos_));
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string EncodeContainer(const std::vector<NamedArray>& records) {
  std::string out(kMagic, 4);
  PutLe<uint32_t>(out, kContainerVersion);
  for (const NamedArray& r : records) {
    uint64_t n = 1;
    for (uint64_t d : r.dims) n *= d;
    if (n != r.data.size())
      throw Error("record " + r.name + " payload does not match its dims");
    PutLe<uint32_t>(out, static_cast<uint32_t>(r.name.size()));
    out += r.name;
    PutLe<uint32_t>(out, static_cast<uint32_t>(r.dims.size()));
    for (uint64_t d : r.dims) PutLe<uint64_t>(out, d);
    for (double v : r.data) PutLe<double>(out, v);
  }
  return out;
}

std::vector<NamedArray> DecodeContainer(std::string_view bytes) {
  Reader in(bytes);
  if (in.Take(4, "magic") != std::string_view(kMagic, 4))
    throw CorruptFile("bad magic: not a SCRP container");
  uint32_t version = in.Get<uint32_t>("version");
  if (version != kContainerVersion)
    throw CorruptFile("unsupported container version " + std::to_string(version) +
                      " (supported: " + std::to_string(kContainerVersion) + ")");
  std::vector<NamedArray> records;
  while (!in.done()) {
    NamedArray r;
    uint32_t name_len = in.Get<uint32_t>("name length");
    r.name = std::string(in.Take(name_len, "name"));
    uint32_t rank = in.Get<uint32_t>("rank");
    if (rank > 16) throw CorruptFile("implausible rank " + std::to_string(rank) + " in " + r.name);
    uint64_t n = 1;
    for (uint32_t i = 0; i < rank; ++i) {
      uint64_t d = in.Get<uint64_t>("dims");
      r.dims.push_back(d);
      if (d != 0 && n > (bytes.size() / 8) / d)
        throw CorruptFile("payload of " + r.name + " exceeds file length");
      n *= d;
    }
    r.data.resize(n);
    for (uint64_t i = 0; i < n; ++i) r.data[i] = in.Get<double>("payload");
    records.push_back(std::move(r));
  }
  return records;
}

void WriteContainer(const std::filesystem::path& path, const std::vector<NamedArray>& records) {
  std::string bytes = EncodeContainer(records);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

std::vector<NamedArray> ReadContainer(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return DecodeContainer(buf.str());
}

const NamedArray& FindRecord(const std::vector<NamedArray>& records, std::string_view name) {
  for (const NamedArray& r : records)
    if (r.name == name) return r;
  throw CorruptFile("missing record '" + std::string(name) + "'");
}

}  // namespace scriptorium
