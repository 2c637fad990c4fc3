// scriptorium/data/reactions.h

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

#ifndef SCRIPTORIUM_DATA_REACTIONS_H_
#define SCRIPTORIUM_DATA_REACTIONS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scriptorium/data/manifest.h"
#include "scriptorium/psych/psych-loss.h"

namespace scriptorium {
namespace data {

// Records slower than this are treated as annotator distraction and dropped.
inline constexpr double kOutlierMs = 60000.0;

// The reaction time of a record: the mean per-character time when present,
// otherwise the line time. Empty for untimed records.
std::optional<double> RecordReactionTime(const LineRecord& record);

struct ReactionIngest {
  ReactionSet set;  // surviving training-split times; m = set.max_ms()
  std::map<std::string, PsychAnnotation> annotations;  // by record id
  std::vector<std::string> dropped;  // ids of outlier records
  std::size_t timed_train = 0;  // training records contributing to the set
  std::size_t total_train = 0;
  double coverage() const {
    return total_train == 0 ? 0.0
                            : static_cast<double>(timed_train) / static_cast<double>(total_train);
  }
};

// Drops outliers, computes m over the training split and annotates every
// surviving timed record (records of other splits slower than m are clamped
// with a warning). Throws NoTimedRecords when no training record is timed.
ReactionIngest IngestReactions(const std::vector<LineRecord>& records,
                               const DiagnosticSink& log = nullptr,
                               double outlier_ms = kOutlierMs);

}  // namespace data
}  // namespace scriptorium

#endif  // SCRIPTORIUM_DATA_REACTIONS_H_
