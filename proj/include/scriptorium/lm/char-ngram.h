// scriptorium/lm/char-ngram.h

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

#ifndef SCRIPTORIUM_LM_CHAR_NGRAM_H_
#define SCRIPTORIUM_LM_CHAR_NGRAM_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "scriptorium/base/container.h"
#include "scriptorium/textcore/alphabet.h"

namespace scriptorium {
namespace lm {

inline constexpr int kMaxOrder = 10;

// Pads the start of every line; never part of the vocabulary.
inline constexpr char32_t kLineStart = U'\x02';

struct LmTrainStats {
  std::size_t lines = 0;           // lines counted
  std::size_t excluded_lines = 0;  // held-out lines skipped
  std::size_t characters = 0;      // characters counted
  std::size_t dropped_characters = 0;  // outside the vocabulary
};

// Character n-gram model with interpolated Witten-Bell smoothing. The
// vocabulary is the alphabet's symbols plus space.
class CharNgramModel {
 public:
  CharNgramModel() = default;

  // Counts orders 1..order over the lines, each padded with order-1 line-start
  // symbols. Lines equal to an entry of `exclude` are skipped; characters
  // outside the vocabulary are dropped. Throws EmptyCorpus when nothing is
  // counted and Error for an order outside 1..kMaxOrder.
  static CharNgramModel Train(const std::vector<std::string>& lines, int order,
                              const Alphabet& alphabet,
                              const std::set<std::string>& exclude = {},
                              LmTrainStats* stats = nullptr);

  int order() const { return order_; }
  const std::u32string& vocabulary() const { return vocab_; }
  bool InVocabulary(char32_t c) const;

  // log P(next | context). Only the last order-1 characters of the context
  // matter; a context shorter than that is treated as the start of a line.
  // With smoothing, Witten-Bell interpolation down to a uniform distribution;
  // without, the maximum-likelihood estimate at the longest context seen in
  // training, or kLogZero when the pair was never seen. Throws UnknownChar
  // when next is outside the vocabulary.
  double LogProb(std::u32string_view context, char32_t next, bool smoothing = true) const;

  // Raw count of `next` after exactly `context` (its length selects the
  // order; at most order-1 characters).
  uint64_t Count(std::u32string_view context, char32_t next) const;
  // Number of contexts of the given length with nonzero count.
  std::size_t NumContexts(int length) const;
  // True if some counted n-gram (context + next) equals `ngram`.
  bool HasNgram(std::u32string_view ngram) const;

  std::vector<NamedArray> ToRecords() const;
  static CharNgramModel FromRecords(const std::vector<NamedArray>& records);
  void Save(const std::filesystem::path& path) const;
  static CharNgramModel Load(const std::filesystem::path& path);

  bool operator==(const CharNgramModel&) const = default;

 private:
  struct Node {
    uint64_t total = 0;
    std::map<char32_t, uint64_t> next;
    bool operator==(const Node&) const = default;
  };
  const Node* Find(std::u32string_view context) const;
  std::u32string History(std::u32string_view context) const;

  int order_ = 0;
  std::u32string vocab_;
  // contexts_[k] maps a context of length k to its continuation counts.
  std::vector<std::unordered_map<std::u32string, Node>> contexts_;
};

}  // namespace lm
}  // namespace scriptorium

#endif  // SCRIPTORIUM_LM_CHAR_NGRAM_H_
