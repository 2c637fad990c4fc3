// scriptorium/cli/run-history.h

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

#ifndef SCRIPTORIUM_CLI_RUN_HISTORY_H_
#define SCRIPTORIUM_CLI_RUN_HISTORY_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "scriptorium/nnet/trainer.h"

namespace scriptorium {
namespace cli {

// Run configuration as ordered key/value pairs; the ordering makes the
// textual form, and hence the hash, canonical.
using RunConfig = std::map<std::string, std::string>;

// 64-bit FNV-1a over the "key=value\n" lines of the config.
uint64_t ConfigHash(const RunConfig& config);
std::string FormatHash(uint64_t hash);

// A training history as written next to each checkpoint: '#' header lines
// carrying the run configuration, then a CSV table with one row per epoch.
struct RunHistory {
  RunConfig config;
  std::vector<nnet::EpochRecord> epochs;

  // Lowest validation CER over all epochs; throws EmptySplit if none.
  double BestValCer() const;
};

std::string FormatHistory(const RunHistory& history);
// Throws SchemaError naming `source` on malformed input.
RunHistory ParseHistory(std::string_view text, const std::string& source = "history");
RunHistory LoadHistory(const std::filesystem::path& path);

struct PairedRow {
  std::string seed;
  double ctc_cer = 0.0;
  double psych_cer = 0.0;
  double delta = 0.0;  // psych - ctc; negative means the psychophysical run won
};

struct PairedComparison {
  std::vector<PairedRow> rows;  // ordered by seed
  double mean_delta = 0.0;
  double standard_error = 0.0;  // sample standard deviation / sqrt(n); 0 when n = 1
  int psych_wins = 0;
  int ctc_wins = 0;
  int ties = 0;
};

// Pairs histories by their "seed" entry; each seed needs exactly one "ctc"
// and one "psych" run ("loss" entry). Throws UnpairedRuns otherwise, and when
// fewer than two histories are given.
PairedComparison ComparePaired(const std::vector<RunHistory>& histories);

std::string FormatComparison(const PairedComparison& comparison);

}  // namespace cli
}  // namespace scriptorium

#endif  // SCRIPTORIUM_CLI_RUN_HISTORY_H_
