// tests/unit/lm_test.cc

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
#include <random>

#include <gtest/gtest.h>

#include "scriptorium/base/error.h"
#include "scriptorium/base/matrix.h"
#include "scriptorium/base/utf8.h"
#include "scriptorium/lm/char-ngram.h"

namespace scriptorium {
namespace lm {
namespace {

double SumOverVocabulary(const CharNgramModel& m, std::u32string_view context) {
  double s = 0.0;
  for (char32_t c : m.vocabulary()) s += std::exp(m.LogProb(context, c));
  return s;
}

std::vector<std::string> RandomCorpus(std::mt19937& rng, int lines) {
  const std::string chars = "abcd ";
  std::uniform_int_distribution<int> len(1, 12), pick(0, 4);
  std::vector<std::string> out;
  for (int i = 0; i < lines; ++i) {
    std::string s;
    for (int n = len(rng); n > 0; --n) s += chars[pick(rng)];
    out.push_back(s);
  }
  return out;
}

TEST(CharNgramTest, CountsBigramsByHand) {
  CharNgramModel m = CharNgramModel::Train({"aaaa"}, 2, Alphabet::FromUtf8("a"));
  EXPECT_EQ(m.Count(U"a", U'a'), 3u);
  EXPECT_EQ(m.Count(std::u32string(1, kLineStart), U'a'), 1u);
  EXPECT_EQ(m.Count(U"", U'a'), 4u);
}

TEST(CharNgramTest, WittenBellSplitsMassByHand) {
  Alphabet ab = Alphabet::FromUtf8("ab");
  CharNgramModel m = CharNgramModel::Train({"ab"}, 2, ab);
  // Vocabulary {a, b, space}. Unigram: c(b)=1 of 2 tokens, 2 types:
  // P1(b) = (1 + 2/3) / (2 + 2) = 5/12. After "a": c(a,b)=1, c(a)=1, one
  // type: P(b|a) = (1 + 1 * 5/12) / 2.
  const double unigram_b = (1.0 + 2.0 / 3.0) / 4.0;
  EXPECT_NEAR(std::exp(m.LogProb(U"a", U'b')), (1.0 + unigram_b) / 2.0, 1e-12);
  // Half of the mass goes to the maximum-likelihood branch (MLE = 1).
  EXPECT_NEAR(std::exp(m.LogProb(U"a", U'b')) - 0.5 * unigram_b, 0.5 * 1.0, 1e-12);
  EXPECT_NEAR(std::exp(m.LogProb(U"a", U'b', false)), 1.0, 1e-12);
}

TEST(CharNgramTest, UnigramIgnoresContext) {
  Alphabet ab = Alphabet::FromUtf8("abc");
  CharNgramModel m = CharNgramModel::Train({"abcab", "cc"}, 1, ab);
  for (char32_t c : std::u32string(U"abc "))
    EXPECT_DOUBLE_EQ(m.LogProb(U"ab", c), m.LogProb(U"", c));
}

TEST(CharNgramTest, NormalizedForRandomContexts) {
  std::mt19937 rng(1);
  Alphabet ab = Alphabet::FromUtf8("abcd");
  CharNgramModel m = CharNgramModel::Train(RandomCorpus(rng, 40), 4, ab);
  std::uniform_int_distribution<int> len(0, 6), pick(0, 4);
  const std::u32string chars = U"abcd ";
  for (int i = 0; i < 200; ++i) {
    std::u32string ctx;
    for (int n = len(rng); n > 0; --n) ctx.push_back(chars[pick(rng)]);
    EXPECT_NEAR(SumOverVocabulary(m, ctx), 1.0, 1e-9);
  }
}

TEST(CharNgramTest, UnseenContextBacksOffAndUnsmoothedIsLogZero) {
  Alphabet ab = Alphabet::FromUtf8("abc");
  CharNgramModel m = CharNgramModel::Train({"ab ab"}, 3, ab);
  const double backed_off = m.LogProb(U"cc", U'a');
  EXPECT_TRUE(std::isfinite(backed_off));
  // Unigram over "ab ab": (c(a) + types/V) / (tokens + types) = (2 + 3/4) / 8.
  EXPECT_NEAR(backed_off, std::log(2.75 / 8.0), 1e-12);
  EXPECT_TRUE(IsLogZero(m.LogProb(U"ab", U'c', false)));
  EXPECT_FALSE(IsLogZero(m.LogProb(U"ab", U' ', false)));
}

TEST(CharNgramTest, UnknownCharAndBadOrder) {
  Alphabet ab = Alphabet::FromUtf8("ab");
  CharNgramModel m = CharNgramModel::Train({"ab"}, 2, ab);
  EXPECT_THROW(m.LogProb(U"a", U'z'), UnknownChar);
  EXPECT_THROW(CharNgramModel::Train({"ab"}, 0, ab), Error);
  EXPECT_THROW(CharNgramModel::Train({"ab"}, 11, ab), Error);
  EXPECT_NO_THROW(CharNgramModel::Train({"ab"}, 10, ab));
}

TEST(CharNgramTest, EmptyCorpusAndDroppedCharacters) {
  Alphabet ab = Alphabet::FromUtf8("ab");
  EXPECT_THROW(CharNgramModel::Train({}, 2, ab), EmptyCorpus);
  EXPECT_THROW(CharNgramModel::Train({"xyz"}, 2, ab), EmptyCorpus);
  LmTrainStats stats;
  CharNgramModel::Train({"axb", "b"}, 2, ab, {}, &stats);
  EXPECT_EQ(stats.dropped_characters, 1u);
  EXPECT_EQ(stats.characters, 3u);
  EXPECT_EQ(stats.lines, 2u);
}

TEST(CharNgramTest, AddingAnOccurrenceNeverLowersItsProbability) {
  std::mt19937 rng(2);
  Alphabet ab = Alphabet::FromUtf8("abcd");
  const std::u32string chars = U"abcd ";
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::string> corpus = RandomCorpus(rng, 15);
    std::uniform_int_distribution<int> pick(0, 4);
    std::u32string ctx = {chars[pick(rng)], chars[pick(rng)]};
    char32_t next = chars[pick(rng)];
    CharNgramModel before = CharNgramModel::Train(corpus, 3, ab);
    corpus.push_back(Utf8Encode(ctx + next));
    CharNgramModel after = CharNgramModel::Train(corpus, 3, ab);
    EXPECT_GE(after.LogProb(ctx, next), before.LogProb(ctx, next) - 1e-15);
  }
}

TEST(CharNgramTest, HeldOutLinesNeverReachTheCounts) {
  Alphabet ab = Alphabet::FromUtf8("abcdxyz");
  std::vector<std::string> corpus = {"ab cd", "dc ba", "zyx xyz", "abc"};
  LmTrainStats stats;
  CharNgramModel m = CharNgramModel::Train(corpus, 7, ab, {"zyx xyz"}, &stats);
  EXPECT_EQ(stats.excluded_lines, 1u);
  EXPECT_FALSE(m.HasNgram(U"zyx xyz"));
  EXPECT_FALSE(m.HasNgram(U"z"));
  EXPECT_TRUE(m.HasNgram(U"ab cd"));
  EXPECT_EQ(m, CharNgramModel::Train({"ab cd", "dc ba", "abc"}, 7, ab));
}

TEST(CharNgramTest, PersistenceRoundTrip) {
  std::mt19937 rng(3);
  Alphabet ab = Alphabet::FromUtf8("abcd");
  CharNgramModel m = CharNgramModel::Train(RandomCorpus(rng, 30), 5, ab);
  CharNgramModel back = CharNgramModel::FromRecords(m.ToRecords());
  EXPECT_EQ(back, m);
  EXPECT_EQ(back.LogProb(U"abc", U'd'), m.LogProb(U"abc", U'd'));
  std::vector<NamedArray> recs = m.ToRecords();
  recs[0].data[0] = 7.0;
  EXPECT_THROW(CharNgramModel::FromRecords(recs), CorruptFile);
}

}  // namespace
}  // namespace lm
}  // namespace scriptorium
