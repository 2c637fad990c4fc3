// scriptorium/textcore/alphabet.h

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

#ifndef SCRIPTORIUM_TEXTCORE_ALPHABET_H_
#define SCRIPTORIUM_TEXTCORE_ALPHABET_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scriptorium {

// Label ids are 1-based indices into Alphabet::symbols(); 0 is the CTC blank
// and never appears in a LabelSeq.
using LabelSeq = std::vector<int32_t>;

inline constexpr int32_t kBlank = 0;

class Alphabet {
 public:
  Alphabet() = default;
  // Throws Error on duplicate symbols.
  explicit Alphabet(std::u32string symbols);
  static Alphabet FromUtf8(std::string_view symbols);

  // Alphabet file: first line is the comment "#blank=0", then one UTF-8
  // symbol per line in index order.
  static Alphabet Load(const std::filesystem::path& path);
  void Save(const std::filesystem::path& path) const;
  std::string Serialize() const;
  static Alphabet Parse(std::string_view contents);

  const std::u32string& symbols() const { return symbols_; }
  int32_t size() const { return static_cast<int32_t>(symbols_.size()); }
  // Symbols plus blank.
  int32_t num_classes() const { return size() + 1; }

  bool Contains(char32_t c) const { return index_.count(c) != 0; }
  // -1 when absent.
  int32_t IndexOf(char32_t c) const;
  char32_t Symbol(int32_t id) const;

  // Throws UnknownSymbol(character, position).
  LabelSeq Encode(std::u32string_view text) const;
  LabelSeq EncodeUtf8(std::string_view text) const;
  std::u32string Decode(const LabelSeq& ids) const;
  std::string DecodeUtf8(const LabelSeq& ids) const;

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

 private:
  std::u32string symbols_;
  std::unordered_map<char32_t, int32_t> index_;
};

// The CTC many-to-one map: merge adjacent repeats, then drop blanks.
LabelSeq Collapse(const std::vector<int32_t>& path);

// Number of frames the shortest path emitting `label` needs: one per symbol
// plus a separating blank between each adjacent equal pair.
int32_t RequiredFrames(const LabelSeq& label);

}  // namespace scriptorium

#endif  // SCRIPTORIUM_TEXTCORE_ALPHABET_H_
