// tests/unit/decode_test.cc

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

#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "scriptorium/base/error.h"
#include "scriptorium/base/utf8.h"
#include "scriptorium/decode/decoder.h"
#include "testing/gradcheck.h"

namespace scriptorium {
namespace decode {
namespace {

PosteriorGrid OneHot(const std::vector<int>& path, int classes) {
  PosteriorGrid g = PosteriorGrid::Constant(static_cast<int>(path.size()), classes,
                                            std::log(1e-6));
  for (std::size_t t = 0; t < path.size(); ++t)
    g(static_cast<int>(t), path[t]) = std::log(1.0 - (classes - 1) * 1e-6);
  return g;
}

FusionConfig VisionOnly(int beam) {
  FusionConfig cfg;
  cfg.w_lm = 0.0;
  cfg.w_word = 0.0;
  cfg.beam_width = beam;
  return cfg;
}

TEST(GreedyDecodeTest, Examples) {
  Alphabet ab = Alphabet::FromUtf8("ab");
  EXPECT_EQ(GreedyDecode(OneHot({1, 0, 1}, 3), ab), "aa");
  EXPECT_EQ(GreedyDecode(OneHot({1, 1, 2}, 3), ab), "ab");
  EXPECT_EQ(GreedyDecode(OneHot({0, 0, 0}, 3), ab), "");
}

TEST(FusionTest, ScoreArithmetic) {
  FusionConfig cfg;
  EXPECT_NEAR(FusedScore(-1.0, -0.5, 1, cfg), -0.35, 1e-12);
  EXPECT_EQ(cfg.w_vision, 1.0);
  EXPECT_EQ(cfg.w_lm, 1.9);
  EXPECT_EQ(cfg.w_word, 1.6);
  EXPECT_EQ(cfg.beam_width, 16);
  cfg.beam_width = 0;
  EXPECT_THROW(cfg.Validate(), Error);
}

TEST(FusionTest, WordCompletion) {
  EXPECT_EQ(WordIncrement(U"ab", U' '), 1);
  EXPECT_EQ(WordIncrement(U"ab ", U' '), 0);
  EXPECT_EQ(WordIncrement(U"", U' '), 0);
  EXPECT_EQ(WordIncrement(U"ab", U'c'), 0);
}

TEST(BeamSearchTest, WidthOneWithoutFusionEqualsGreedyOnOneHotGrids) {
  Alphabet ab = Alphabet::FromUtf8("ab c.");
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    std::vector<int> path(1 + rng() % 12);
    for (int& c : path) c = static_cast<int>(rng() % ab.num_classes());
    PosteriorGrid g = OneHot(path, ab.num_classes());
    EXPECT_EQ(BeamDecode(g, ab, nullptr, VisionOnly(1)), GreedyDecode(g, ab));
  }
}

// Probability of every collapsed string, by enumerating all C^T paths.
std::map<LabelSeq, double> CollapsedMass(const PosteriorGrid& g) {
  const int T = static_cast<int>(g.rows()), C = static_cast<int>(g.cols());
  std::map<LabelSeq, double> mass;
  long long n = 1;
  for (int t = 0; t < T; ++t) n *= C;
  std::vector<int32_t> path(T);
  for (long long code = 0; code < n; ++code) {
    long long rest = code;
    double p = 1.0;
    for (int t = 0; t < T; ++t) {
      path[t] = static_cast<int32_t>(rest % C);
      rest /= C;
      p *= std::exp(g(t, path[t]));
    }
    mass[Collapse(path)] += p;
  }
  return mass;
}

TEST(BeamSearchTest, WideBeamFindsMostProbableStringByEnumeration) {
  Alphabet ab = Alphabet::FromUtf8("abc");
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const int T = 1 + static_cast<int>(rng() % 6);
    const int C = 2 + static_cast<int>(rng() % 3);
    Alphabet sub(ab.symbols().substr(0, C - 1));
    PosteriorGrid g = LogSoftmaxRows(testing::RandomLogits(rng, T, C));
    auto mass = CollapsedMass(g);
    auto best = std::max_element(mass.begin(), mass.end(),
                                 [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<Hypothesis> beam = BeamSearch(g, sub, nullptr, VisionOnly(1000));
    EXPECT_EQ(sub.Encode(beam.front().prefix), best->first);
    EXPECT_NEAR(beam.front().vision(), std::log(best->second), 1e-9);
  }
}

TEST(SpecialRulesTest, FirstCharacterIsScoredByVisionOnly) {
  Alphabet ab = Alphabet::FromUtf8("ab");
  lm::CharNgramModel m = lm::CharNgramModel::Train({"a", "a", "a", "ab"}, 2, ab);
  ASSERT_GT(m.LogProb(U"", U'a'), m.LogProb(U"", U'b') + 1.0);
  PosteriorGrid g(1, 3);
  g << std::log(0.2), std::log(0.4), std::log(0.4);
  std::vector<Hypothesis> beam = BeamSearch(g, ab, &m, FusionConfig{});
  std::map<std::u32string, double> score;
  for (const Hypothesis& h : beam) score[h.prefix] = h.fused_score;
  ASSERT_TRUE(score.count(U"a") && score.count(U"b"));
  EXPECT_EQ(score[U"a"], score[U"b"]);
  EXPECT_EQ(LmIncrement(&m, U"", U'b', FusionConfig{}), 0.0);
  FusionConfig off;
  off.first_char_vision_only = false;
  EXPECT_EQ(LmIncrement(&m, U"", U'b', off), m.LogProb(U"", U'b'));
}

TEST(SpecialRulesTest, PunctuationFrameAdmitsNoAlternatives) {
  Alphabet ab = Alphabet::FromUtf8("a.");
  PosteriorGrid g(1, 3);
  g << std::log(0.1), std::log(0.4), std::log(0.5);  // argmax '.'
  FusionConfig cfg = VisionOnly(10);
  for (const Hypothesis& h : BeamSearch(g, ab, nullptr, cfg))
    EXPECT_TRUE(h.prefix.empty() || h.prefix == U".") << Utf8Encode(h.prefix);
  cfg.lock_punctuation = false;
  bool saw_a = false;
  for (const Hypothesis& h : BeamSearch(g, ab, nullptr, cfg)) saw_a |= h.prefix == U"a";
  EXPECT_TRUE(saw_a);
  EXPECT_TRUE(IsPunctuation(U'\''));
  EXPECT_TRUE(IsPunctuation(U'-'));
  EXPECT_FALSE(IsPunctuation(U'a'));
}

TEST(SpecialRulesTest, CharacterAfterApostropheUsesUnsmoothedModel) {
  Alphabet ab = Alphabet::FromUtf8("dont'");
  lm::CharNgramModel m = lm::CharNgramModel::Train({"don't", "dot"}, 3, ab);
  FusionConfig cfg;
  EXPECT_EQ(LmIncrement(&m, U"don'", U't', cfg), m.LogProb(U"don'", U't', false));
  EXPECT_TRUE(IsLogZero(LmIncrement(&m, U"don'", U'o', cfg)));
  cfg.apostrophe_no_smoothing = false;
  EXPECT_EQ(LmIncrement(&m, U"don'", U'o', cfg), m.LogProb(U"don'", U'o', true));
  EXPECT_FALSE(IsLogZero(LmIncrement(&m, U"don'", U'o', cfg)));
}

TEST(BeamSearchTest, OutputStaysInsideTheAlphabet) {
  Alphabet ab = Alphabet::FromUtf8("ab .'");
  lm::CharNgramModel m = lm::CharNgramModel::Train({"ab ba. a'b"}, 3, ab);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    PosteriorGrid g = LogSoftmaxRows(testing::RandomLogits(rng, 8, ab.num_classes()));
    for (char32_t c : Utf8Decode(BeamDecode(g, ab, &m, FusionConfig{})))
      EXPECT_TRUE(ab.Contains(c));
  }
}

TEST(BeamSearchTest, FinalScoresMatchCandidateScoring) {
  // The beam's fused score of a hypothesis equals the exact score of its
  // string whenever the beam is wide enough to keep every alignment.
  Alphabet ab = Alphabet::FromUtf8("ab ");
  lm::CharNgramModel m = lm::CharNgramModel::Train({"ab ba", "a b"}, 3, ab);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    PosteriorGrid g = LogSoftmaxRows(testing::RandomLogits(rng, 4, ab.num_classes()));
    FusionConfig cfg;
    cfg.beam_width = 10000;
    for (const Hypothesis& h : BeamSearch(g, ab, &m, cfg))
      EXPECT_NEAR(h.fused_score, ScoreCandidate(g, ab, &m, cfg, Utf8Encode(h.prefix)), 1e-9);
  }
}

TEST(BeamSearchTest, ExhaustiveBeamScoresAtLeastAsHighAsAnyNarrowerBeam) {
  // Width-to-width monotonicity does not hold for pruned prefix search in
  // general; a beam that never prunes bounds every narrower one.
  Alphabet ab = Alphabet::FromUtf8("ab d");
  lm::CharNgramModel m = lm::CharNgramModel::Train({"ab da", "da ab", "abd dab"}, 3, ab);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    PosteriorGrid g = LogSoftmaxRows(testing::RandomLogits(rng, 5, ab.num_classes()));
    FusionConfig full;
    full.beam_width = 100000;
    const double best = BeamSearch(g, ab, &m, full).front().fused_score;
    for (int w = 1; w <= 16; w *= 2) {
      FusionConfig cfg;
      cfg.beam_width = w;
      EXPECT_LE(BeamSearch(g, ab, &m, cfg).front().fused_score, best + 1e-12);
    }
  }
}

TEST(BeamSearchTest, GridAlphabetMismatchIsBadShape) {
  EXPECT_THROW(BeamDecode(OneHot({1}, 4), Alphabet::FromUtf8("ab"), nullptr, FusionConfig{}),
               BadShape);
}

}  // namespace
}  // namespace decode
}  // namespace scriptorium
