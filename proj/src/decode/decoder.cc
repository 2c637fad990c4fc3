// src/decode/decoder.cc

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

#include "scriptorium/decode/decoder.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "scriptorium/base/error.h"
#include "scriptorium/base/utf8.h"

namespace scriptorium {
namespace decode {

namespace {

int EndOfLineWord(std::u32string_view prefix) {
  return !prefix.empty() && prefix.back() != U' ' ? 1 : 0;
}

bool Better(const Hypothesis& a, const Hypothesis& b) {
  if (a.fused_score != b.fused_score) return a.fused_score > b.fused_score;
  return a.prefix < b.prefix;
}

}  // namespace

std::string GreedyDecode(const PosteriorGrid& grid, const Alphabet& alphabet) {
  return alphabet.DecodeUtf8(BestPath(grid));
}

void FusionConfig::Validate() const {
  if (beam_width < 1) throw Error("beam width must be at least 1");
  if (!std::isfinite(w_vision) || !std::isfinite(w_lm) || !std::isfinite(w_word))
    throw Error("fusion weights must be finite");
}

bool IsPunctuation(char32_t c) {
  static constexpr std::u32string_view kPunctuation = U".,;:!?'\"()-";
  return kPunctuation.find(c) != std::u32string_view::npos;
}

double FusedScore(double vision, double lm_score, int word_count, const FusionConfig& cfg) {
  return cfg.w_vision * vision + cfg.w_lm * lm_score + cfg.w_word * word_count;
}

double LmIncrement(const lm::CharNgramModel* lm, std::u32string_view prefix, char32_t next,
                   const FusionConfig& cfg) {
  if (!lm) return 0.0;
  if (prefix.empty() && cfg.first_char_vision_only) return 0.0;
  const bool smoothing = !(cfg.apostrophe_no_smoothing && !prefix.empty() && prefix.back() == U'\'');
  return lm->LogProb(prefix, next, smoothing);
}

int WordIncrement(std::u32string_view prefix, char32_t next) {
  return next == U' ' && !prefix.empty() && prefix.back() != U' ' ? 1 : 0;
}

std::vector<Hypothesis> BeamSearch(const PosteriorGrid& grid, const Alphabet& alphabet,
                                   const lm::CharNgramModel* lm, const FusionConfig& cfg) {
  cfg.Validate();
  CheckPosteriorGrid(grid);
  if (grid.cols() != alphabet.num_classes())
    throw BadShape("grid has " + std::to_string(grid.cols()) + " classes, alphabet needs " +
                   std::to_string(alphabet.num_classes()));
  const int frames = static_cast<int>(grid.rows());
  const int classes = static_cast<int>(grid.cols());

  std::vector<Hypothesis> beam(1);
  beam[0].p_blank = 0.0;
  beam[0].fused_score = 0.0;
  std::vector<int> candidates;
  for (int t = 0; t < frames; ++t) {
    int argmax = 0;
    grid.row(t).maxCoeff(&argmax);
    candidates.clear();
    if (cfg.lock_punctuation && argmax != kBlank && IsPunctuation(alphabet.Symbol(argmax))) {
      candidates.push_back(argmax);
    } else {
      for (int c = 1; c < classes; ++c) candidates.push_back(c);
    }

    std::map<std::u32string, Hypothesis> next;
    auto slot = [&](const Hypothesis& parent, std::u32string prefix, char32_t added)
        -> Hypothesis& {
      auto [it, fresh] = next.try_emplace(prefix);
      if (fresh) {
        it->second.prefix = std::move(prefix);
        it->second.lm_score = parent.lm_score;
        it->second.word_count = parent.word_count;
        if (added) {
          it->second.lm_score = std::max(
              kLogZero, parent.lm_score + LmIncrement(lm, parent.prefix, added, cfg));
          it->second.word_count += WordIncrement(parent.prefix, added);
        }
      }
      return it->second;
    };

    for (const Hypothesis& h : beam) {
      const double total = h.vision();
      // Blank: prefix unchanged.
      Hypothesis& same = slot(h, h.prefix, 0);
      same.p_blank = LogAdd(same.p_blank, total + grid(t, kBlank));
      const int last = h.prefix.empty() ? -1 : alphabet.IndexOf(h.prefix.back());
      for (int c : candidates) {
        const double y = grid(t, c);
        if (c == last) {
          // Repeat merges into the same symbol unless separated by blank.
          same.p_nonblank = LogAdd(same.p_nonblank, h.p_nonblank + y);
          Hypothesis& ext = slot(h, h.prefix + alphabet.Symbol(c), alphabet.Symbol(c));
          ext.p_nonblank = LogAdd(ext.p_nonblank, h.p_blank + y);
        } else {
          Hypothesis& ext = slot(h, h.prefix + alphabet.Symbol(c), alphabet.Symbol(c));
          ext.p_nonblank = LogAdd(ext.p_nonblank, total + y);
        }
      }
    }

    beam.clear();
    for (auto& [prefix, h] : next) {
      h.fused_score = FusedScore(h.vision(), h.lm_score, h.word_count, cfg);
      beam.push_back(std::move(h));
    }
    std::sort(beam.begin(), beam.end(), Better);
    if (beam.size() > static_cast<std::size_t>(cfg.beam_width)) beam.resize(cfg.beam_width);
  }

  for (Hypothesis& h : beam) {
    h.word_count += EndOfLineWord(h.prefix);
    h.fused_score = FusedScore(h.vision(), h.lm_score, h.word_count, cfg);
  }
  std::sort(beam.begin(), beam.end(), Better);
  return beam;
}

std::string BeamDecode(const PosteriorGrid& grid, const Alphabet& alphabet,
                       const lm::CharNgramModel* lm, const FusionConfig& cfg) {
  return Utf8Encode(BeamSearch(grid, alphabet, lm, cfg).front().prefix);
}

double ScoreCandidate(const PosteriorGrid& grid, const Alphabet& alphabet,
                      const lm::CharNgramModel* lm, const FusionConfig& cfg,
                      std::string_view text) {
  const std::u32string chars = Utf8Decode(text);
  double vision;
  try {
    vision = -CtcLoss(grid, alphabet.Encode(chars)).loss;
  } catch (const ImpossibleLabel&) {
    return kLogZero;
  }
  double lm_score = 0.0;
  int words = 0;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    std::u32string_view prefix(chars.data(), i);
    lm_score = std::max(kLogZero, lm_score + LmIncrement(lm, prefix, chars[i], cfg));
    words += WordIncrement(prefix, chars[i]);
  }
  words += EndOfLineWord(chars);
  return FusedScore(vision, lm_score, words, cfg);
}

}  // namespace decode
}  // namespace scriptorium
