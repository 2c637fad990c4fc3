// tests/unit/run_history_test.cc

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

#include <gtest/gtest.h>

#include "scriptorium/base/error.h"
#include "scriptorium/cli/run-history.h"

namespace scriptorium {
namespace cli {
namespace {

RunHistory MakeHistory(const std::string& loss, const std::string& seed,
                       std::vector<double> val_cers) {
  RunHistory h;
  h.config = {{"loss", loss}, {"seed", seed}, {"lr", "0.0005"}};
  int epoch = 1;
  for (double cer : val_cers)
    h.epochs.push_back({epoch++, 10.0 / epoch, cer, std::min(1.0, 2 * cer), 5e-4});
  return h;
}

TEST(RunHistoryTest, RoundTripsExactly) {
  RunHistory h = MakeHistory("psych", "3", {0.5, 0.1 + 0.2, 1.0 / 3.0});
  std::string text = FormatHistory(h);
  EXPECT_NE(text.find("# config_hash="), std::string::npos);
  RunHistory back = ParseHistory(text);
  EXPECT_EQ(back.config, h.config);
  EXPECT_EQ(back.epochs, h.epochs);
}

TEST(RunHistoryTest, HashCoversEveryEntry) {
  RunConfig a = {{"seed", "1"}, {"loss", "ctc"}};
  RunConfig b = a;
  b["seed"] = "2";
  EXPECT_NE(ConfigHash(a), ConfigHash(b));
  EXPECT_EQ(ConfigHash(a), ConfigHash(RunConfig{{"loss", "ctc"}, {"seed", "1"}}));
  EXPECT_EQ(FormatHash(0xabcull), "0000000000000abc");
}

TEST(RunHistoryTest, RejectsMalformedFiles) {
  std::string text = FormatHistory(MakeHistory("ctc", "1", {0.5}));
  std::string tampered = text;
  tampered.replace(tampered.find("# seed=1"), 8, "# seed=9");
  EXPECT_THROW(ParseHistory(tampered), SchemaError);
  EXPECT_THROW(ParseHistory("# seed=1\n"), SchemaError);
  EXPECT_THROW(ParseHistory("epoch,train_loss,val_cer,val_wer,lr\n1,2,3\n"), SchemaError);
  EXPECT_THROW(ParseHistory("epoch,train_loss,val_cer,val_wer,lr\n1,x,3,4,5\n"), SchemaError);
}

TEST(RunHistoryTest, BestValCerIsTheMinimum) {
  EXPECT_DOUBLE_EQ(MakeHistory("ctc", "1", {0.4, 0.2, 0.3}).BestValCer(), 0.2);
  EXPECT_THROW(MakeHistory("ctc", "1", {}).BestValCer(), EmptySplit);
}

TEST(RunHistoryTest, IdenticalHistoriesGiveZeroDeltaAndNoWins) {
  PairedComparison c =
      ComparePaired({MakeHistory("ctc", "1", {0.3, 0.2}), MakeHistory("psych", "1", {0.3, 0.2})});
  ASSERT_EQ(c.rows.size(), 1u);
  EXPECT_EQ(c.rows[0].delta, 0.0);
  EXPECT_EQ(c.psych_wins, 0);
  EXPECT_EQ(c.ctc_wins, 0);
  EXPECT_EQ(c.ties, 1);
  EXPECT_EQ(c.standard_error, 0.0);
}

TEST(RunHistoryTest, FiveSeedStatisticsMatchHandComputation) {
  // Best CERs per seed: ctc {0.20, 0.25, 0.30, 0.22, 0.28},
  // psych {0.18, 0.26, 0.27, 0.22, 0.25}.
  // Deltas {-0.02, +0.01, -0.03, 0, -0.03}: sum -0.07, mean -0.014.
  // Squared deviations from the mean: 0.000036, 0.000576, 0.000256, 0.000196,
  // 0.000256; sum 0.00132; variance 0.00033; SE sqrt(0.00033 / 5) = 0.0081240.
  std::vector<RunHistory> runs;
  const double ctc[] = {0.20, 0.25, 0.30, 0.22, 0.28};
  const double psych[] = {0.18, 0.26, 0.27, 0.22, 0.25};
  for (int s = 0; s < 5; ++s) {
    runs.push_back(MakeHistory("ctc", std::to_string(s + 1), {0.9, ctc[s]}));
    runs.push_back(MakeHistory("psych", std::to_string(s + 1), {psych[s], 0.95}));
  }
  PairedComparison c = ComparePaired(runs);
  ASSERT_EQ(c.rows.size(), 5u);
  EXPECT_NEAR(c.mean_delta, -0.014, 1e-12);
  EXPECT_NEAR(c.standard_error, 0.0081240384, 1e-9);
  EXPECT_EQ(c.psych_wins, 3);
  EXPECT_EQ(c.ctc_wins, 1);
  EXPECT_EQ(c.ties, 1);
  std::string table = FormatComparison(c);
  EXPECT_NE(table.find("mean delta -0.0140 +/- 0.0081 (SE, n=5)"), std::string::npos) << table;
  EXPECT_NE(table.find("psych wins 3/5"), std::string::npos) << table;
}

TEST(RunHistoryTest, UnpairedRunsAreRejected) {
  EXPECT_THROW(ComparePaired({MakeHistory("ctc", "1", {0.1})}), UnpairedRuns);
  EXPECT_THROW(ComparePaired({MakeHistory("ctc", "1", {0.1}), MakeHistory("psych", "2", {0.1})}),
               UnpairedRuns);
  EXPECT_THROW(ComparePaired({MakeHistory("ctc", "1", {0.1}), MakeHistory("ctc", "1", {0.1})}),
               UnpairedRuns);
  RunHistory no_seed = MakeHistory("psych", "1", {0.1});
  no_seed.config.erase("seed");
  EXPECT_THROW(ComparePaired({MakeHistory("ctc", "1", {0.1}), no_seed}), UnpairedRuns);
}

}  // namespace
}  // namespace cli
}  // namespace scriptorium
