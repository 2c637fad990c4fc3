// scriptorium/data/manifest.h

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

#ifndef SCRIPTORIUM_DATA_MANIFEST_H_
#define SCRIPTORIUM_DATA_MANIFEST_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scriptorium/textcore/alphabet.h"

namespace scriptorium {
namespace data {

inline constexpr int kSchemaVersion = 1;

enum class Split { kTrain = 0, kValidation = 1, kTest = 2 };

std::string SplitName(Split split);
// Throws SchemaError for anything but "train", "validation" or "test".
Split ParseSplit(std::string_view name);

// One annotated line. Optional fields are omitted from the serialized form
// when absent.
struct LineRecord {
  std::string id;
  Split split = Split::kTrain;
  std::string image_path;  // relative to the manifest directory
  std::string transcription;
  std::string annotator_id;
  std::optional<std::vector<double>> char_times_ms;
  std::optional<double> line_time_ms;
  std::optional<int> difficulty;  // 1..5
  std::optional<std::vector<double>> keystroke_times_ms;
  std::optional<std::string> session_id;
  std::optional<std::string> received_at;  // server audit timestamp
  std::optional<std::string> page;  // source page, for page-disjoint splits

  bool operator==(const LineRecord&) const = default;
};

struct Manifest {
  Alphabet alphabet;
  std::vector<LineRecord> records;

  // Number of records per split, indexed by Split.
  std::array<std::size_t, 3> Counts() const;
  std::vector<const LineRecord*> InSplit(Split split) const;
};

// Canonical single-line JSON for a record: fixed key order, no whitespace.
std::string SerializeRecord(const LineRecord& record);

// Parses one JSON line; `line_number` is used in error messages. Throws
// SchemaError on a missing or mistyped field or an unsupported version.
LineRecord ParseRecord(std::string_view json, std::size_t line_number);

// Checks the record-level invariants (timing, difficulty range, alphabet
// coverage). Throws SchemaError naming the line and offending value, or
// AlphabetMismatch for a transcription character missing from the alphabet.
void ValidateRecord(const LineRecord& record, const Alphabet& alphabet,
                    std::size_t line_number);

struct LoadOptions {
  bool check_images = true;  // throw MissingImage for absent image files
};

// Reads `path` (JSON Lines) and the alphabet file next to it. Rejects ids that
// repeat, within or across splits.
Manifest LoadManifest(const std::filesystem::path& path, const LoadOptions& options = {});
Manifest ParseManifest(std::string_view contents, const Alphabet& alphabet,
                       const std::filesystem::path& base_dir, const LoadOptions& options = {});

std::string SerializeManifest(const std::vector<LineRecord>& records);
// Writes the records and alphabet.txt into path's directory.
void WriteManifest(const std::filesystem::path& path, const Manifest& manifest);

inline constexpr const char* kAlphabetFileName = "alphabet.txt";
inline constexpr const char* kManifestFileName = "manifest.jsonl";

// Reassigns splits so that all lines of one page share a split. Pages
// (records without a page use their id) are shuffled with `seed` and filled
// into train, validation and test in the given proportions.
void AssignPageDisjointSplits(std::vector<LineRecord>& records, double train_fraction,
                              double validation_fraction, uint64_t seed);

}  // namespace data
}  // namespace scriptorium

#endif  // SCRIPTORIUM_DATA_MANIFEST_H_
