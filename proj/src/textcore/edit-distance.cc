// src/textcore/edit-distance.cc

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

#include "scriptorium/textcore/edit-distance.h"

#include "scriptorium/base/error.h"
#include "scriptorium/base/utf8.h"

namespace scriptorium {

std::vector<std::u32string> SplitWords(std::u32string_view text) {
  std::vector<std::u32string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == U' ') ++i;
    std::size_t start = i;
    while (i < text.size() && text[i] != U' ') ++i;
    if (i > start) words.emplace_back(text.substr(start, i - start));
  }
  return words;
}

std::size_t CharEditDistance(std::string_view pred, std::string_view ref) {
  return EditDistance(Utf8Decode(pred), Utf8Decode(ref));
}

double Cer(std::string_view pred, std::string_view ref) {
  std::u32string r = Utf8Decode(ref);
  if (r.empty()) throw EmptyReference("CER reference is empty");
  return static_cast<double>(EditDistance(Utf8Decode(pred), r)) /
         static_cast<double>(r.size());
}

double Wer(std::string_view pred, std::string_view ref) {
  auto r = SplitWords(Utf8Decode(ref));
  if (r.empty()) throw EmptyReference("WER reference has no words");
  auto p = SplitWords(Utf8Decode(pred));
  return static_cast<double>(EditDistance(p, r)) / static_cast<double>(r.size());
}

void ErrorCounts::Add(std::string_view pred, std::string_view ref) {
  std::u32string p = Utf8Decode(pred), r = Utf8Decode(ref);
  char_edits += EditDistance(p, r);
  char_ref += r.size();
  auto pw = SplitWords(p), rw = SplitWords(r);
  word_edits += EditDistance(pw, rw);
  word_ref += rw.size();
}

double ErrorCounts::cer() const {
  if (char_ref == 0) throw EmptyReference("no reference characters");
  return static_cast<double>(char_edits) / static_cast<double>(char_ref);
}

double ErrorCounts::wer() const {
  if (word_ref == 0) throw EmptyReference("no reference words");
  return static_cast<double>(word_edits) / static_cast<double>(word_ref);
}

}  // namespace scriptorium
