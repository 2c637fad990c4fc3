// src/data/reactions.cc

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

#include "scriptorium/data/reactions.h"

#include <cstdio>

#include "scriptorium/base/error.h"

namespace scriptorium {
namespace data {

std::optional<double> RecordReactionTime(const LineRecord& record) {
  if (record.char_times_ms && !record.char_times_ms->empty())
    return LineReactionTime(*record.char_times_ms);
  return record.line_time_ms;
}

namespace {

ReactionSet BuildSet(const std::vector<LineRecord>& records, double outlier_ms,
                     std::vector<std::string>& dropped, std::size_t& timed_train,
                     std::size_t& total_train, const DiagnosticSink& log) {
  std::vector<double> times;
  for (const LineRecord& r : records) {
    if (r.split == Split::kTrain) ++total_train;
    std::optional<double> t = RecordReactionTime(r);
    if (!t) continue;
    if (*t > outlier_ms) {
      dropped.push_back(r.id);
      if (log) log("dropping " + r.id + ": reaction time " + std::to_string(*t) + " ms");
      continue;
    }
    if (r.split != Split::kTrain) continue;
    times.push_back(*t);
    ++timed_train;
  }
  if (times.empty()) throw NoTimedRecords("no timed training records");
  return ReactionSet(std::move(times));
}

}  // namespace

ReactionIngest IngestReactions(const std::vector<LineRecord>& records, const DiagnosticSink& log,
                               double outlier_ms) {
  std::vector<std::string> dropped;
  std::size_t timed_train = 0, total_train = 0;
  ReactionSet set = BuildSet(records, outlier_ms, dropped, timed_train, total_train, log);
  ReactionIngest out{std::move(set), {}, std::move(dropped), timed_train, total_train};
  for (const LineRecord& r : records) {
    std::optional<double> t = RecordReactionTime(r);
    if (!t || *t > outlier_ms) continue;
    out.annotations.emplace(r.id, Annotate(r.id, *t, out.set, log));
  }
  if (log) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "reaction times: m=%.1f ms, coverage %.1f%% (%zu/%zu)",
                  out.set.max_ms(), 100.0 * out.coverage(), out.timed_train, out.total_train);
    log(buf);
  }
  return out;
}

}  // namespace data
}  // namespace scriptorium
