// src/lm/char-ngram.cc

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

#include "scriptorium/lm/char-ngram.h"

#include <algorithm>
#include <cmath>

#include "scriptorium/base/error.h"
#include "scriptorium/base/matrix.h"
#include "scriptorium/base/utf8.h"

namespace scriptorium {
namespace lm {

namespace {

constexpr double kFormatVersion = 1.0;

std::string OrderRecordName(int length) { return "lm/order/" + std::to_string(length); }

}  // namespace

CharNgramModel CharNgramModel::Train(const std::vector<std::string>& lines, int order,
                                     const Alphabet& alphabet,
                                     const std::set<std::string>& exclude,
                                     LmTrainStats* stats) {
  if (order < 1 || order > kMaxOrder)
    throw Error("n-gram order must be in 1.." + std::to_string(kMaxOrder));
  CharNgramModel m;
  m.order_ = order;
  m.vocab_ = alphabet.symbols();
  if (!alphabet.Contains(U' ')) m.vocab_.push_back(U' ');
  m.contexts_.resize(order);
  LmTrainStats local;
  for (const std::string& line : lines) {
    if (exclude.count(line)) {
      ++local.excluded_lines;
      continue;
    }
    std::u32string padded(order - 1, kLineStart);
    for (char32_t c : Utf8Decode(line)) {
      if (!m.InVocabulary(c)) {
        ++local.dropped_characters;
        continue;
      }
      const std::size_t pos = padded.size();
      for (int k = 0; k < order; ++k) {
        Node& node = m.contexts_[k][padded.substr(pos - k, k)];
        ++node.total;
        ++node.next[c];
      }
      padded.push_back(c);
      ++local.characters;
    }
    ++local.lines;
  }
  if (stats) *stats = local;
  if (local.characters == 0) throw EmptyCorpus("language-model corpus has no usable characters");
  return m;
}

bool CharNgramModel::InVocabulary(char32_t c) const {
  return vocab_.find(c) != std::u32string::npos;
}

const CharNgramModel::Node* CharNgramModel::Find(std::u32string_view context) const {
  const std::size_t k = context.size();
  if (k >= contexts_.size()) return nullptr;
  auto it = contexts_[k].find(std::u32string(context));
  return it == contexts_[k].end() ? nullptr : &it->second;
}

std::u32string CharNgramModel::History(std::u32string_view context) const {
  const std::size_t need = static_cast<std::size_t>(order_ - 1);
  if (context.size() >= need) return std::u32string(context.substr(context.size() - need));
  std::u32string h(need - context.size(), kLineStart);
  h.append(context);
  return h;
}

double CharNgramModel::LogProb(std::u32string_view context, char32_t next,
                               bool smoothing) const {
  if (!InVocabulary(next))
    throw UnknownChar("character '" + Utf8Encode(next) + "' is not in the LM vocabulary");
  const std::u32string h = History(context);
  auto suffix = [&](int k) { return std::u32string_view(h).substr(h.size() - k); };
  if (!smoothing) {
    for (int k = order_ - 1; k >= 0; --k) {
      const Node* node = Find(suffix(k));
      if (!node || node->total == 0) continue;
      auto it = node->next.find(next);
      if (it == node->next.end()) return kLogZero;
      return std::log(static_cast<double>(it->second) / static_cast<double>(node->total));
    }
    return kLogZero;
  }
  double p = 1.0 / static_cast<double>(vocab_.size());
  for (int k = 0; k < order_; ++k) {
    const Node* node = Find(suffix(k));
    if (!node || node->total == 0) break;  // longer contexts are unseen too
    auto it = node->next.find(next);
    const double c = it == node->next.end() ? 0.0 : static_cast<double>(it->second);
    const double types = static_cast<double>(node->next.size());
    p = (c + types * p) / (static_cast<double>(node->total) + types);
  }
  return std::log(p);
}

uint64_t CharNgramModel::Count(std::u32string_view context, char32_t next) const {
  const Node* node = Find(context);
  if (!node) return 0;
  auto it = node->next.find(next);
  return it == node->next.end() ? 0 : it->second;
}

std::size_t CharNgramModel::NumContexts(int length) const {
  if (length < 0 || length >= order_) return 0;
  return contexts_[length].size();
}

bool CharNgramModel::HasNgram(std::u32string_view ngram) const {
  if (ngram.empty() || ngram.size() > static_cast<std::size_t>(order_)) return false;
  return Count(ngram.substr(0, ngram.size() - 1), ngram.back()) > 0;
}

std::vector<NamedArray> CharNgramModel::ToRecords() const {
  std::vector<NamedArray> out;
  out.push_back({"lm/meta", {2}, {kFormatVersion, static_cast<double>(order_)}});
  NamedArray vocab{"lm/vocab", {vocab_.size()}, {}};
  for (char32_t c : vocab_) vocab.data.push_back(static_cast<double>(c));
  out.push_back(std::move(vocab));
  for (int k = 0; k < order_; ++k) {
    std::vector<std::pair<std::u32string, const Node*>> sorted;
    for (const auto& [ctx, node] : contexts_[k]) sorted.emplace_back(ctx, &node);
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    NamedArray rec{OrderRecordName(k), {0, static_cast<uint64_t>(k + 2)}, {}};
    for (const auto& [ctx, node] : sorted)
      for (const auto& [c, count] : node->next) {
        for (char32_t x : ctx) rec.data.push_back(static_cast<double>(x));
        rec.data.push_back(static_cast<double>(c));
        rec.data.push_back(static_cast<double>(count));
        ++rec.dims[0];
      }
    out.push_back(std::move(rec));
  }
  return out;
}

CharNgramModel CharNgramModel::FromRecords(const std::vector<NamedArray>& records) {
  const NamedArray& meta = FindRecord(records, "lm/meta");
  if (meta.data.size() != 2) throw CorruptFile("lm/meta must hold 2 values");
  if (meta.data[0] != kFormatVersion)
    throw CorruptFile("unsupported language-model version " + std::to_string(meta.data[0]));
  CharNgramModel m;
  m.order_ = static_cast<int>(meta.data[1]);
  if (m.order_ < 1 || m.order_ > kMaxOrder) throw CorruptFile("bad language-model order");
  for (double c : FindRecord(records, "lm/vocab").data) m.vocab_.push_back(static_cast<char32_t>(c));
  m.contexts_.resize(m.order_);
  for (int k = 0; k < m.order_; ++k) {
    const NamedArray& rec = FindRecord(records, OrderRecordName(k));
    const std::size_t width = static_cast<std::size_t>(k + 2);
    if (rec.dims.size() != 2 || rec.dims[1] != width || rec.data.size() != rec.dims[0] * width)
      throw CorruptFile("malformed record " + rec.name);
    for (std::size_t row = 0; row < rec.dims[0]; ++row) {
      const double* r = rec.data.data() + row * width;
      std::u32string ctx;
      for (int i = 0; i < k; ++i) ctx.push_back(static_cast<char32_t>(r[i]));
      const auto next = static_cast<char32_t>(r[k]);
      const auto count = static_cast<uint64_t>(r[k + 1]);
      if (!m.InVocabulary(next) || count == 0) throw CorruptFile("bad entry in " + rec.name);
      Node& node = m.contexts_[k][ctx];
      node.next[next] += count;
      node.total += count;
    }
  }
  return m;
}

void CharNgramModel::Save(const std::filesystem::path& path) const {
  WriteContainer(path, ToRecords());
}

CharNgramModel CharNgramModel::Load(const std::filesystem::path& path) {
  return FromRecords(ReadContainer(path));
}

}  // namespace lm
}  // namespace scriptorium
