// src/cli/run-history.cc

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

#include "scriptorium/cli/run-history.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "scriptorium/base/error.h"
#include "scriptorium/base/file-io.h"

namespace scriptorium {
namespace cli {

namespace {

constexpr std::string_view kColumns = "epoch,train_loss,val_cer,val_wer,lr";

// Shortest text that parses back to the same double.
std::string FormatDouble(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

std::vector<std::string_view> SplitOn(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <typename T>
T ParseNumber(std::string_view field, const std::string& where) {
  T value{};
  auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size())
    throw SchemaError(where + ": bad number '" + std::string(field) + "'");
  return value;
}

const std::string& Require(const RunConfig& config, const std::string& key) {
  auto it = config.find(key);
  if (it == config.end()) throw UnpairedRuns("history has no '" + key + "' entry");
  return it->second;
}

}  // namespace

uint64_t ConfigHash(const RunConfig& config) {
  uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [key, value] : config) {
    mix(key);
    mix("=");
    mix(value);
    mix("\n");
  }
  return h;
}

std::string FormatHash(uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

double RunHistory::BestValCer() const {
  if (epochs.empty()) throw EmptySplit("history has no epochs");
  double best = std::numeric_limits<double>::infinity();
  for (const nnet::EpochRecord& e : epochs) best = std::min(best, e.val_cer);
  return best;
}

std::string FormatHistory(const RunHistory& history) {
  std::ostringstream out;
  out << "# scriptorium training history\n";
  out << "# config_hash=" << FormatHash(ConfigHash(history.config)) << "\n";
  for (const auto& [key, value] : history.config) out << "# " << key << "=" << value << "\n";
  out << kColumns << "\n";
  for (const nnet::EpochRecord& e : history.epochs) {
    out << e.epoch << "," << FormatDouble(e.train_loss) << "," << FormatDouble(e.val_cer) << ","
        << FormatDouble(e.val_wer) << "," << FormatDouble(e.lr) << "\n";
  }
  return out.str();
}

RunHistory ParseHistory(std::string_view text, const std::string& source) {
  RunHistory history;
  bool have_columns = false;
  std::string stored_hash;
  int line_no = 0;
  for (std::string_view line : SplitOn(text, '\n')) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (have_columns) throw SchemaError(where + ": header line after the table");
      std::string_view body = line.substr(1);
      while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      std::size_t eq = body.find('=');
      if (eq == std::string_view::npos) continue;  // free-form comment
      std::string key(body.substr(0, eq)), value(body.substr(eq + 1));
      if (key == "config_hash") {
        stored_hash = value;
      } else if (!history.config.emplace(key, value).second) {
        throw SchemaError(where + ": duplicate header key '" + key + "'");
      }
      continue;
    }
    if (!have_columns) {
      if (line != kColumns) throw SchemaError(where + ": expected columns '" +
                                              std::string(kColumns) + "'");
      have_columns = true;
      continue;
    }
    std::vector<std::string_view> f = SplitOn(line, ',');
    if (f.size() != 5) throw SchemaError(where + ": expected 5 fields");
    nnet::EpochRecord e;
    e.epoch = ParseNumber<int>(f[0], where);
    e.train_loss = ParseNumber<double>(f[1], where);
    e.val_cer = ParseNumber<double>(f[2], where);
    e.val_wer = ParseNumber<double>(f[3], where);
    e.lr = ParseNumber<double>(f[4], where);
    history.epochs.push_back(e);
  }
  if (!have_columns) throw SchemaError(source + ": missing column line");
  if (!stored_hash.empty() && stored_hash != FormatHash(ConfigHash(history.config)))
    throw SchemaError(source + ": config_hash does not match the header entries");
  return history;
}

RunHistory LoadHistory(const std::filesystem::path& path) {
  return ParseHistory(ReadFile(path), path.string());
}

PairedComparison ComparePaired(const std::vector<RunHistory>& histories) {
  if (histories.size() < 2) throw UnpairedRuns("need at least two histories to compare");
  std::map<std::string, std::map<std::string, const RunHistory*>> by_seed;
  for (const RunHistory& h : histories) {
    const std::string& seed = Require(h.config, "seed");
    const std::string& loss = Require(h.config, "loss");
    if (loss != "ctc" && loss != "psych") throw UnpairedRuns("unknown loss '" + loss + "'");
    if (!by_seed[seed].emplace(loss, &h).second)
      throw UnpairedRuns("seed " + seed + " has two '" + loss + "' runs");
  }
  PairedComparison result;
  for (const auto& [seed, runs] : by_seed) {
    if (runs.size() != 2) throw UnpairedRuns("seed " + seed + " has no partner run");
    PairedRow row;
    row.seed = seed;
    row.ctc_cer = runs.at("ctc")->BestValCer();
    row.psych_cer = runs.at("psych")->BestValCer();
    row.delta = row.psych_cer - row.ctc_cer;
    if (row.delta < 0) {
      ++result.psych_wins;
    } else if (row.delta > 0) {
      ++result.ctc_wins;
    } else {
      ++result.ties;
    }
    result.rows.push_back(row);
  }
  const double n = static_cast<double>(result.rows.size());
  double sum = 0.0;
  for (const PairedRow& r : result.rows) sum += r.delta;
  result.mean_delta = sum / n;
  if (result.rows.size() > 1) {
    double ss = 0.0;
    for (const PairedRow& r : result.rows) ss += (r.delta - result.mean_delta) * (r.delta - result.mean_delta);
    result.standard_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return result;
}

std::string FormatComparison(const PairedComparison& c) {
  std::ostringstream out;
  char buf[160];
  out << "seed,ctc_best_val_cer,psych_best_val_cer,delta\n";
  for (const PairedRow& r : c.rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.4f,%.4f,%+.4f\n", r.seed.c_str(), r.ctc_cer,
                  r.psych_cer, r.delta);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "mean delta %+.4f +/- %.4f (SE, n=%zu)\n", c.mean_delta,
                c.standard_error, c.rows.size());
  out << buf;
  std::snprintf(buf, sizeof(buf), "psych wins %d/%zu, ctc wins %d, ties %d\n", c.psych_wins,
                c.rows.size(), c.ctc_wins, c.ties);
  out << buf;
  return out.str();
}

}  // namespace cli
}  // namespace scriptorium
