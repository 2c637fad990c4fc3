// scriptorium/textcore/edit-distance.h

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

#ifndef SCRIPTORIUM_TEXTCORE_EDIT_DISTANCE_H_
#define SCRIPTORIUM_TEXTCORE_EDIT_DISTANCE_H_

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace scriptorium {

// Levenshtein distance, unit costs, two-row DP.
template <typename Seq>
std::size_t EditDistance(const Seq& a, const Seq& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

// Splits on runs of ASCII space; leading/trailing spaces yield no tokens.
std::vector<std::u32string> SplitWords(std::u32string_view text);

// Edit distance over Unicode scalar values of two UTF-8 strings.
std::size_t CharEditDistance(std::string_view pred, std::string_view ref);

// Character error rate, normalized by the reference length; can exceed 1.
// Case-sensitive. Throws EmptyReference.
double Cer(std::string_view pred, std::string_view ref);

// Word error rate over space-separated tokens. Throws EmptyReference when the
// reference has no words.
double Wer(std::string_view pred, std::string_view ref);

// Corpus-level accumulator: total edits over total reference length.
struct ErrorCounts {
  std::size_t char_edits = 0;
  std::size_t char_ref = 0;
  std::size_t word_edits = 0;
  std::size_t word_ref = 0;

  void Add(std::string_view pred, std::string_view ref);
  double cer() const;
  double wer() const;
};

}  // namespace scriptorium

#endif  // SCRIPTORIUM_TEXTCORE_EDIT_DISTANCE_H_
