// src/data/manifest.cc

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

#include "scriptorium/data/manifest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <json.hpp>

#include "scriptorium/base/error.h"
#include "scriptorium/base/file-io.h"
#include "scriptorium/base/utf8.h"

namespace scriptorium {
namespace data {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

const std::set<std::string>& KnownKeys() {
  static const std::set<std::string> keys = {
      "schema_version", "id",         "split",          "image_path",
      "transcription",  "annotator_id", "char_times_ms", "line_time_ms",
      "difficulty",     "keystroke_times_ms", "session_id", "received_at",
      "page"};
  return keys;
}

[[noreturn]] void Fail(std::size_t line, const std::string& what) {
  throw SchemaError("manifest line " + std::to_string(line) + ": " + what);
}

std::string RequireString(const Json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) Fail(line, std::string("missing field '") + key + "'");
  if (!it->is_string()) Fail(line, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::optional<std::string> OptionalString(const Json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  if (!it->is_string()) Fail(line, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::optional<double> OptionalNumber(const Json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  if (!it->is_number()) Fail(line, std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

std::optional<std::vector<double>> OptionalNumbers(const Json& obj, const char* key,
                                                   std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  if (!it->is_array()) Fail(line, std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const Json& v : *it) {
    if (!v.is_number()) Fail(line, std::string("field '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "validation";
    case Split::kTest: return "test";
  }
  return "train";
}

Split ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "validation") return Split::kValidation;
  if (name == "test") return Split::kTest;
  throw SchemaError("unknown split '" + std::string(name) + "'");
}

std::array<std::size_t, 3> Manifest::Counts() const {
  std::array<std::size_t, 3> counts{};
  for (const LineRecord& r : records) ++counts[static_cast<int>(r.split)];
  return counts;
}

std::vector<const LineRecord*> Manifest::InSplit(Split split) const {
  std::vector<const LineRecord*> out;
  for (const LineRecord& r : records)
    if (r.split == split) out.push_back(&r);
  return out;
}

std::string SerializeRecord(const LineRecord& r) {
  OrderedJson j;
  j["schema_version"] = kSchemaVersion;
  j["id"] = r.id;
  j["split"] = SplitName(r.split);
  j["image_path"] = r.image_path;
  j["transcription"] = r.transcription;
  j["annotator_id"] = r.annotator_id;
  if (r.char_times_ms) j["char_times_ms"] = *r.char_times_ms;
  if (r.line_time_ms) j["line_time_ms"] = *r.line_time_ms;
  if (r.difficulty) j["difficulty"] = *r.difficulty;
  if (r.keystroke_times_ms) j["keystroke_times_ms"] = *r.keystroke_times_ms;
  if (r.session_id) j["session_id"] = *r.session_id;
  if (r.received_at) j["received_at"] = *r.received_at;
  if (r.page) j["page"] = *r.page;
  return j.dump();
}

LineRecord ParseRecord(std::string_view text, std::size_t line) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) Fail(line, "not valid JSON");
  if (!j.is_object()) Fail(line, "expected a JSON object");
  for (const auto& [key, value] : j.items())
    if (!KnownKeys().count(key)) Fail(line, "unknown field '" + key + "'");
  auto version = j.find("schema_version");
  if (version == j.end()) Fail(line, "missing field 'schema_version'");
  if (!version->is_number_integer() || version->get<int>() != kSchemaVersion)
    Fail(line, "unsupported schema_version " + version->dump());

  LineRecord r;
  r.id = RequireString(j, "id", line);
  if (r.id.empty()) Fail(line, "empty id");
  r.split = ParseSplit(RequireString(j, "split", line));
  r.image_path = RequireString(j, "image_path", line);
  r.transcription = RequireString(j, "transcription", line);
  r.annotator_id = RequireString(j, "annotator_id", line);
  r.char_times_ms = OptionalNumbers(j, "char_times_ms", line);
  r.line_time_ms = OptionalNumber(j, "line_time_ms", line);
  if (auto it = j.find("difficulty"); it != j.end()) {
    if (!it->is_number_integer()) Fail(line, "field 'difficulty' must be an integer");
    r.difficulty = it->get<int>();
  }
  r.keystroke_times_ms = OptionalNumbers(j, "keystroke_times_ms", line);
  r.session_id = OptionalString(j, "session_id", line);
  r.received_at = OptionalString(j, "received_at", line);
  r.page = OptionalString(j, "page", line);
  return r;
}

void ValidateRecord(const LineRecord& r, const Alphabet& alphabet, std::size_t line) {
  std::u32string text;
  try {
    text = Utf8Decode(r.transcription);
  } catch (const Error& e) {
    Fail(line, std::string("transcription is not UTF-8: ") + e.what());
  }
  for (char32_t c : text)
    if (!alphabet.Contains(c))
      throw AlphabetMismatch("manifest line " + std::to_string(line) + ": transcription character '" +
                             Utf8Encode(c) + "' is not in the alphabet");
  if (r.char_times_ms) {
    if (r.char_times_ms->empty()) Fail(line, "char_times_ms is empty");
    for (double t : *r.char_times_ms)
      if (!(t > 0.0) || !std::isfinite(t)) Fail(line, "char_times_ms entries must be positive");
  }
  if (r.line_time_ms) {
    if (!(*r.line_time_ms > 0.0) || !std::isfinite(*r.line_time_ms))
      Fail(line, "line_time_ms must be positive");
    if (r.char_times_ms) {
      const auto& ct = *r.char_times_ms;
      double mean = std::accumulate(ct.begin(), ct.end(), 0.0) / static_cast<double>(ct.size());
      if (std::abs(mean - *r.line_time_ms) > 1e-6 * std::max(1.0, mean))
        Fail(line, "line_time_ms must equal the mean of char_times_ms");
    }
  }
  if (r.difficulty && (*r.difficulty < 1 || *r.difficulty > 5))
    Fail(line, "difficulty must be in 1..5");
  if (r.keystroke_times_ms) {
    double prev = 0.0;
    for (double t : *r.keystroke_times_ms) {
      if (!(t >= prev) || !std::isfinite(t))
        Fail(line, "keystroke_times_ms must be non-negative and non-decreasing");
      prev = t;
    }
  }
}

Manifest ParseManifest(std::string_view contents, const Alphabet& alphabet,
                       const std::filesystem::path& base_dir, const LoadOptions& options) {
  Manifest m;
  m.alphabet = alphabet;
  std::map<std::string, std::size_t> seen;
  std::size_t line = 0, pos = 0;
  while (pos < contents.size()) {
    std::size_t end = contents.find('\n', pos);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view text = contents.substr(pos, end - pos);
    pos = end + 1;
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    LineRecord r = ParseRecord(text, line);
    ValidateRecord(r, alphabet, line);
    auto [it, fresh] = seen.emplace(r.id, line);
    if (!fresh)
      Fail(line, "id '" + r.id + "' already used on line " + std::to_string(it->second));
    if (options.check_images && !std::filesystem::exists(base_dir / r.image_path))
      throw MissingImage("manifest line " + std::to_string(line) + ": image " +
                         (base_dir / r.image_path).string() + " does not exist");
    m.records.push_back(std::move(r));
  }
  return m;
}

Manifest LoadManifest(const std::filesystem::path& path, const LoadOptions& options) {
  const std::filesystem::path dir = path.parent_path();
  Alphabet alphabet = Alphabet::Load(dir / kAlphabetFileName);
  return ParseManifest(ReadFile(path), alphabet, dir, options);
}

std::string SerializeManifest(const std::vector<LineRecord>& records) {
  std::string out;
  for (const LineRecord& r : records) {
    out += SerializeRecord(r);
    out += '\n';
  }
  return out;
}

void WriteManifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::set<std::string> ids;
  for (const LineRecord& r : manifest.records)
    if (!ids.insert(r.id).second) throw SchemaError("duplicate id '" + r.id + "'");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  WriteFileAtomic(path.parent_path() / kAlphabetFileName, manifest.alphabet.Serialize());
  WriteFileAtomic(path, SerializeManifest(manifest.records));
}

void AssignPageDisjointSplits(std::vector<LineRecord>& records, double train_fraction,
                              double validation_fraction, uint64_t seed) {
  if (train_fraction < 0 || validation_fraction < 0 || train_fraction + validation_fraction > 1)
    throw Error("split fractions must be non-negative and sum to at most 1");
  // Pages in first-appearance order, then shuffled deterministically.
  std::vector<std::string> pages;
  std::map<std::string, std::size_t> lines_per_page;
  for (const LineRecord& r : records) {
    const std::string& page = r.page ? *r.page : r.id;
    if (lines_per_page[page]++ == 0) pages.push_back(page);
  }
  std::mt19937_64 rng(seed);
  std::shuffle(pages.begin(), pages.end(), rng);
  const double total = static_cast<double>(records.size());
  std::map<std::string, Split> assignment;
  std::size_t assigned = 0;
  for (const std::string& page : pages) {
    double done = static_cast<double>(assigned) / total;
    Split s = done < train_fraction                         ? Split::kTrain
              : done < train_fraction + validation_fraction ? Split::kValidation
                                                            : Split::kTest;
    assignment[page] = s;
    assigned += lines_per_page[page];
  }
  for (LineRecord& r : records) r.split = assignment[r.page ? *r.page : r.id];
}

}  // namespace data
}  // namespace scriptorium
