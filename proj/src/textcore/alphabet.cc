// src/textcore/alphabet.cc

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

#include "scriptorium/textcore/alphabet.h"

#include <fstream>
#include <sstream>

#include "scriptorium/base/error.h"
#include "scriptorium/base/utf8.h"

namespace scriptorium {

namespace {
constexpr std::string_view kHeader = "#blank=0";
}

Alphabet::Alphabet(std::u32string symbols) : symbols_(std::move(symbols)) {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    auto [it, inserted] = index_.emplace(symbols_[i], static_cast<int32_t>(i + 1));
    if (!inserted)
      throw Error("duplicate alphabet symbol '" + Utf8Encode(symbols_[i]) + "'");
  }
}

Alphabet Alphabet::FromUtf8(std::string_view symbols) {
  return Alphabet(Utf8Decode(symbols));
}

int32_t Alphabet::IndexOf(char32_t c) const {
  auto it = index_.find(c);
  return it == index_.end() ? -1 : it->second;
}

char32_t Alphabet::Symbol(int32_t id) const {
  if (id < 1 || id > size())
    throw Error("label id " + std::to_string(id) + " outside alphabet of size " +
                std::to_string(size()));
  return symbols_[id - 1];
}

LabelSeq Alphabet::Encode(std::u32string_view text) const {
  LabelSeq ids;
  ids.reserve(text.size());
  for (std::size_t k = 0; k < text.size(); ++k) {
    int32_t id = IndexOf(text[k]);
    if (id < 0) throw UnknownSymbol(text[k], k);
    ids.push_back(id);
  }
  return ids;
}

LabelSeq Alphabet::EncodeUtf8(std::string_view text) const {
  return Encode(Utf8Decode(text));
}

std::u32string Alphabet::Decode(const LabelSeq& ids) const {
  std::u32string out;
  out.reserve(ids.size());
  for (int32_t id : ids) out.push_back(Symbol(id));
  return out;
}

std::string Alphabet::DecodeUtf8(const LabelSeq& ids) const {
  return Utf8Encode(Decode(ids));
}

std::string Alphabet::Serialize() const {
  std::string out(kHeader);
  out += '\n';
  for (char32_t c : symbols_) {
    out += Utf8Encode(c);
    out += '\n';
  }
  return out;
}

Alphabet Alphabet::Parse(std::string_view contents) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < contents.size()) {
    std::size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty() || lines[0] != kHeader)
    throw Error("alphabet file must start with '#blank=0'");
  std::u32string symbols;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::u32string cps = Utf8Decode(lines[i]);
    if (cps.size() != 1)
      throw Error("alphabet line " + std::to_string(i) +
                  " must hold exactly one symbol");
    symbols.push_back(cps[0]);
  }
  return Alphabet(std::move(symbols));
}

Alphabet Alphabet::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open alphabet file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

void Alphabet::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write alphabet file " + path.string());
  out << Serialize();
}

LabelSeq Collapse(const std::vector<int32_t>& path) {
  LabelSeq out;
  int32_t prev = -1;
  for (int32_t k : path) {
    if (k != prev && k != kBlank) out.push_back(k);
    prev = k;
  }
  return out;
}

int32_t RequiredFrames(const LabelSeq& label) {
  int32_t n = static_cast<int32_t>(label.size());
  for (std::size_t i = 1; i < label.size(); ++i)
    if (label[i] == label[i - 1]) ++n;
  return n;
}

}  // namespace scriptorium
