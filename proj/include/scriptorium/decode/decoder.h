// scriptorium/decode/decoder.h

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

#ifndef SCRIPTORIUM_DECODE_DECODER_H_
#define SCRIPTORIUM_DECODE_DECODER_H_

#include <string>
#include <string_view>
#include <vector>

#include "scriptorium/ctc/ctc-loss.h"
#include "scriptorium/lm/char-ngram.h"
#include "scriptorium/textcore/alphabet.h"

namespace scriptorium {
namespace decode {

// Argmax per frame, collapse, render.
std::string GreedyDecode(const PosteriorGrid& grid, const Alphabet& alphabet);

struct FusionConfig {
  double w_vision = 1.0;
  double w_lm = 1.9;
  double w_word = 1.6;
  int beam_width = 16;
  bool first_char_vision_only = true;   // no LM score for the first character
  bool lock_punctuation = true;         // punctuation frames admit no alternatives
  bool apostrophe_no_smoothing = true;  // unsmoothed LM right after an apostrophe

  // Throws Error for beam_width < 1 or non-finite weights.
  void Validate() const;
};

// `.,;:!?'"()-`
bool IsPunctuation(char32_t c);

struct Hypothesis {
  std::u32string prefix;     // collapsed output so far
  double p_blank = kLogZero;     // log mass of paths ending in blank
  double p_nonblank = kLogZero;  // log mass of paths ending in the last symbol
  double lm_score = 0.0;     // accumulated LM log-probability
  int word_count = 0;        // completed words
  double fused_score = kLogZero;

  double vision() const { return LogAdd(p_blank, p_nonblank); }
};

double FusedScore(double vision, double lm_score, int word_count, const FusionConfig& cfg);

// LM log-probability of `next` after `prefix` under the special rules; zero
// without a model or for the first character (when that rule is enabled).
double LmIncrement(const lm::CharNgramModel* lm, std::u32string_view prefix, char32_t next,
                   const FusionConfig& cfg);

// 1 when appending `next` to `prefix` completes a word (a space after a
// non-space character).
int WordIncrement(std::u32string_view prefix, char32_t next);

// CTC prefix beam search. LM and word-reward scores are added when a
// hypothesis extends its collapsed prefix; a word still open at the end of
// the line is rewarded on completion. `lm` may be null (no LM term). Returns
// the final beam, best first; each entry's fused_score is final.
std::vector<Hypothesis> BeamSearch(const PosteriorGrid& grid, const Alphabet& alphabet,
                                   const lm::CharNgramModel* lm, const FusionConfig& cfg);

std::string BeamDecode(const PosteriorGrid& grid, const Alphabet& alphabet,
                       const lm::CharNgramModel* lm, const FusionConfig& cfg);

// Fused score a string would receive: exact vision log-probability (sum over
// all alignments) plus the LM and word terms along its characters. Returns
// kLogZero when the grid cannot produce the string.
double ScoreCandidate(const PosteriorGrid& grid, const Alphabet& alphabet,
                      const lm::CharNgramModel* lm, const FusionConfig& cfg,
                      std::string_view text);

}  // namespace decode
}  // namespace scriptorium

#endif  // SCRIPTORIUM_DECODE_DECODER_H_
