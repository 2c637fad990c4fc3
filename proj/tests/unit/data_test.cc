// tests/unit/data_test.cc

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

#include <filesystem>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "scriptorium/base/error.h"
#include "scriptorium/base/file-io.h"
#include "scriptorium/data/dataset.h"
#include "scriptorium/data/image.h"
#include "scriptorium/data/manifest.h"
#include "scriptorium/data/reactions.h"
#include "scriptorium/data/synth.h"

namespace scriptorium {
namespace data {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("scriptorium-data-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

LineRecord Record(std::string id, Split split, std::string text) {
  LineRecord r;
  r.id = std::move(id);
  r.split = split;
  r.image_path = "images/" + r.id + ".png";
  r.transcription = std::move(text);
  r.annotator_id = "ann-1";
  return r;
}

LoadOptions NoImages() { return LoadOptions{false}; }

TEST(ManifestTest, CanonicalSerializationRoundTripsByteForByte) {
  Alphabet ab = Alphabet::FromUtf8("abc é");
  std::vector<LineRecord> records = {Record("l1", Split::kTrain, "abc"),
                                     Record("l2", Split::kValidation, "é a"),
                                     Record("l3", Split::kTest, "")};
  records[0].char_times_ms = std::vector<double>{500, 700, 900};
  records[0].line_time_ms = 700;
  records[0].difficulty = 3;
  records[1].keystroke_times_ms = std::vector<double>{100, 300, 900};
  records[1].line_time_ms = 900;
  records[1].session_id = "s-1";
  records[1].received_at = "2026-10-16T10:00:00Z";
  records[2].page = "folio-12r";
  const std::string text = SerializeManifest(records);
  Manifest m = ParseManifest(text, ab, ".", NoImages());
  EXPECT_EQ(m.records, records);
  EXPECT_EQ(SerializeManifest(m.records), text);
}

TEST(ManifestTest, KeyOrderDoesNotMatterOnInput) {
  Alphabet ab = Alphabet::FromUtf8("ab");
  const std::string shuffled =
      R"({"transcription":"ab","split":"train","id":"x","annotator_id":"a",)"
      R"("image_path":"i.png","schema_version":1})"
      "\n";
  Manifest m = ParseManifest(shuffled, ab, ".", NoImages());
  ASSERT_EQ(m.records.size(), 1u);
  EXPECT_EQ(SerializeRecord(m.records[0]),
            R"({"schema_version":1,"id":"x","split":"train","image_path":"i.png",)"
            R"("transcription":"ab","annotator_id":"a"})");
}

TEST(ManifestTest, ReportsLargeSplitSizes) {
  Alphabet ab = Alphabet::FromUtf8("ab");
  std::vector<LineRecord> records;
  const std::pair<Split, int> sizes[] = {
      {Split::kTrain, 6161}, {Split::kValidation, 966}, {Split::kTest, 2915}};
  for (auto [split, n] : sizes)
    for (int i = 0; i < n; ++i)
      records.push_back(Record(SplitName(split) + std::to_string(i), split, "ab"));
  Manifest m = ParseManifest(SerializeManifest(records), ab, ".", NoImages());
  EXPECT_EQ(m.Counts(), (std::array<std::size_t, 3>{6161, 966, 2915}));
}

TEST(ManifestTest, SchemaErrorsNameTheProblem) {
  Alphabet ab = Alphabet::FromUtf8("ab");
  auto error_of = [&](const std::string& text) -> std::string {
    try {
      ParseManifest(text, ab, ".", NoImages());
    } catch (const SchemaError& e) {
      return e.what();
    } catch (const AlphabetMismatch& e) {
      return e.what();
    }
    return "";
  };
  std::string good = SerializeRecord(Record("a", Split::kTrain, "ab"));
  EXPECT_NE(error_of(SerializeRecord(Record("a", Split::kTrain, "abz"))).find("'z'"),
            std::string::npos);
  EXPECT_NE(error_of(good + "\n" + SerializeRecord(Record("a", Split::kTest, "a"))).find("line 2"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"schema_version":1,"id":"a"})").find("split"), std::string::npos);
  EXPECT_NE(error_of(R"({"schema_version":2})").find("schema_version"), std::string::npos);
  EXPECT_NE(error_of("{not json").find("line 1"), std::string::npos);
  LineRecord bad = Record("b", Split::kTrain, "a");
  bad.char_times_ms = std::vector<double>{100, 300};
  bad.line_time_ms = 150;
  EXPECT_NE(error_of(SerializeRecord(bad)).find("mean"), std::string::npos);
  bad.line_time_ms = 200;
  EXPECT_EQ(error_of(SerializeRecord(bad)), "");
  bad.difficulty = 6;
  EXPECT_NE(error_of(SerializeRecord(bad)).find("difficulty"), std::string::npos);
  EXPECT_THROW(ParseSplit("dev"), SchemaError);
}

TEST(ManifestTest, MissingImageAndFileRoundTrip) {
  TempDir dir;
  Manifest m;
  m.alphabet = Alphabet::FromUtf8("ab");
  m.records = {Record("a", Split::kTrain, "ab")};
  WriteManifest(dir.path() / kManifestFileName, m);
  EXPECT_THROW(LoadManifest(dir.path() / kManifestFileName), MissingImage);
  Manifest loaded = LoadManifest(dir.path() / kManifestFileName, NoImages());
  EXPECT_EQ(loaded.alphabet, m.alphabet);
  EXPECT_EQ(loaded.records, m.records);
  const std::string before = ReadFile(dir.path() / kManifestFileName);
  WriteManifest(dir.path() / kManifestFileName, loaded);
  EXPECT_EQ(ReadFile(dir.path() / kManifestFileName), before);
}

TEST(ManifestTest, PageDisjointSplits) {
  std::vector<LineRecord> records;
  for (int page = 0; page < 20; ++page)
    for (int line = 0; line < 1 + page % 4; ++line) {
      records.push_back(Record("p" + std::to_string(page) + "l" + std::to_string(line),
                               Split::kTrain, "a"));
      records.back().page = "page-" + std::to_string(page);
    }
  AssignPageDisjointSplits(records, 0.6, 0.2, 7);
  std::map<std::string, std::set<Split>> splits_of_page;
  std::set<Split> used;
  for (const LineRecord& r : records) {
    splits_of_page[*r.page].insert(r.split);
    used.insert(r.split);
  }
  for (const auto& [page, splits] : splits_of_page) EXPECT_EQ(splits.size(), 1u) << page;
  EXPECT_EQ(used.size(), 3u);
}

TEST(ReactionsTest, PenaltiesFromLineTimes) {
  std::vector<LineRecord> records = {Record("a", Split::kTrain, "a"),
                                     Record("b", Split::kTrain, "a"),
                                     Record("c", Split::kTrain, "a"),
                                     Record("d", Split::kTrain, "a")};
  records[0].line_time_ms = 900;
  records[1].line_time_ms = 1400;
  records[2].line_time_ms = 2500;
  ReactionIngest in = IngestReactions(records);
  EXPECT_EQ(in.set.max_ms(), 2500.0);
  EXPECT_DOUBLE_EQ(in.annotations.at("a").z, 1.6);
  EXPECT_DOUBLE_EQ(in.annotations.at("b").z, 1.1);
  EXPECT_EQ(in.annotations.at("c").z, 0.0);
  EXPECT_FALSE(in.annotations.count("d"));
  EXPECT_DOUBLE_EQ(in.coverage(), 0.75);
}

TEST(ReactionsTest, CharacterTimesAreAveraged) {
  std::vector<LineRecord> records = {Record("a", Split::kTrain, "abc"),
                                     Record("b", Split::kTrain, "a")};
  records[0].char_times_ms = std::vector<double>{500, 700, 900};
  records[1].line_time_ms = 1400;
  EXPECT_EQ(*RecordReactionTime(records[0]), 700.0);
  ReactionIngest in = IngestReactions(records);
  EXPECT_DOUBLE_EQ(in.annotations.at("a").z, 0.7);
}

TEST(ReactionsTest, OutliersDroppedBeforeTakingTheMaximum) {
  std::vector<LineRecord> records;
  const double times[] = {900, 1400, 2500, 120000};
  for (int i = 0; i < 4; ++i) {
    records.push_back(Record("r" + std::to_string(i), Split::kTrain, "a"));
    records.back().line_time_ms = times[i];
  }
  std::vector<std::string> log;
  ReactionIngest in = IngestReactions(records, [&](const std::string& m) { log.push_back(m); });
  EXPECT_EQ(in.set.max_ms(), 2500.0);
  EXPECT_EQ(in.dropped, (std::vector<std::string>{"r3"}));
  EXPECT_FALSE(in.annotations.count("r3"));
  EXPECT_FALSE(log.empty());
}

TEST(ReactionsTest, MaximumComesFromTrainingSplitOnly) {
  std::vector<LineRecord> records = {Record("a", Split::kTrain, "a"),
                                     Record("v", Split::kValidation, "a")};
  records[0].line_time_ms = 1000;
  records[1].line_time_ms = 5000;
  std::string warning;
  ReactionIngest in = IngestReactions(records, [&](const std::string& m) { warning += m; });
  EXPECT_EQ(in.set.max_ms(), 1000.0);
  EXPECT_EQ(in.annotations.at("v").z, 0.0);  // clamped
  EXPECT_NE(warning.find("clamped"), std::string::npos);
}

TEST(ReactionsTest, NoTimedRecords) {
  EXPECT_THROW(IngestReactions({Record("a", Split::kTrain, "a")}), NoTimedRecords);
  std::vector<LineRecord> only_outlier = {Record("a", Split::kTrain, "a")};
  only_outlier[0].line_time_ms = 70000;
  EXPECT_THROW(IngestReactions(only_outlier), NoTimedRecords);
}

TEST(ImageTest, PngRoundTripAndInkConversion) {
  GrayImage img{3, 2, {0, 128, 255, 255, 0, 10}};
  EXPECT_EQ(DecodePng(EncodePng(img)), img);
  nnet::Tensor ink = ToInk(img);
  EXPECT_EQ(ink.shape(), (std::vector<int>{2, 3}));
  EXPECT_EQ(ink.at(0, 0), 1.0);
  EXPECT_EQ(ink.at(0, 2), 0.0);
  EXPECT_THROW(DecodePng("not a png"), CorruptFile);
}

TEST(ImageTest, ResizeKeepsAspect) {
  GrayImage img{40, 32, std::vector<uint8_t>(40 * 32, 200)};
  GrayImage out = ResizeToHeight(img, 64);
  EXPECT_EQ(out.height, 64);
  EXPECT_EQ(out.width, 80);
  EXPECT_EQ(out.at(10, 10), 200);
}

TEST(SynthTest, DeterministicGrayscaleAtConfiguredHeight) {
  SynthStyle style;
  GrayImage a = RenderLine("ab", 5, style);
  EXPECT_EQ(a, RenderLine("ab", 5, style));
  EXPECT_NE(a, RenderLine("ab", 6, style));
  EXPECT_EQ(a.height, 64);
  EXPECT_EQ(EncodePng(a), EncodePng(RenderLine("ab", 5, style)));
  style.height = 48;
  EXPECT_EQ(RenderLine("ab", 5, style).height, 48);
}

TEST(SynthTest, EveryCharacterFitsInFourFrames) {
  // The recognizer emits one frame per four columns; each glyph cell must
  // leave room for a separating blank between repeated characters.
  GrayImage img = RenderLine("aaaa", 1, CleanStyle());
  EXPECT_GE((img.width + 3) / 4, 2 * 4 - 1);
}

TEST(SynthTest, UnknownSymbolsAndEmptyCorpus) {
  EXPECT_THROW(RenderLine("a\xC3\xA9", 1, SynthStyle{}), UnknownSymbol);
  EXPECT_TRUE(SynthesizeLines({}, SynthOptions{}).lines.empty());
  SynthOptions o;
  o.count = 0;
  EXPECT_TRUE(SynthesizeLines({"ab"}, o).lines.empty());
}

TEST(SynthTest, CleanLinesHaveNoNoise) {
  GrayImage img = RenderLine("", 1, CleanStyle());
  for (uint8_t p : img.pixels) EXPECT_EQ(p, 255);
}

TEST(SynthTest, DatasetWithSimulatedReadingTimes) {
  TempDir dir;
  SynthOptions o;
  o.count = 30;
  o.seed = 4;
  o.degradation_spread = 1.0;
  SynthDataset ds = SynthesizeLines({"ab ba", "abba", "b a"}, o);
  EXPECT_EQ(ds.alphabet, Alphabet::FromUtf8(" ab"));
  Manifest written = WriteSynthDataset(ds, dir.path());
  Manifest loaded = LoadManifest(dir.path() / kManifestFileName);
  EXPECT_EQ(loaded.records, written.records);
  auto counts = loaded.Counts();
  EXPECT_EQ(counts[0], 24u);
  EXPECT_EQ(counts[1], 3u);
  EXPECT_EQ(counts[2], 3u);
  // Cleaner lines read faster on average.
  double clean = 0, dirty = 0;
  int n_clean = 0, n_dirty = 0;
  for (const SynthLine& l : ds.lines) {
    (l.degradation < 0.5 ? clean : dirty) += *RecordReactionTime(l.record);
    (l.degradation < 0.5 ? n_clean : n_dirty) += 1;
  }
  EXPECT_LT(clean / n_clean, dirty / n_dirty);

  ReactionIngest in = IngestReactions(loaded.records);
  nnet::TrainingData td = LoadTrainingData(loaded, dir.path(), 64, &in.annotations);
  EXPECT_EQ(td.train.size(), 24u);
  EXPECT_TRUE(td.train[0].psych.has_value());
  EXPECT_EQ(td.train[0].image.dim(0), 64);
  EXPECT_THROW(LoadSamples(loaded, Split::kTrain, dir.path(), Alphabet::FromUtf8("a"), 64),
               AlphabetMismatch);
}

}  // namespace
}  // namespace data
}  // namespace scriptorium
