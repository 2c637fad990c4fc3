// scriptorium/psych/psych-loss.h

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

#ifndef SCRIPTORIUM_PSYCH_PSYCH_LOSS_H_
#define SCRIPTORIUM_PSYCH_PSYCH_LOSS_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "scriptorium/base/matrix.h"
#include "scriptorium/ctc/ctc-loss.h"
#include "scriptorium/textcore/alphabet.h"

namespace scriptorium {

// Per-line reaction times of one measurement set (normally the training
// split), in milliseconds. Immutable once built.
class ReactionSet {
 public:
  // Throws EmptyMeasurements when empty, Error on a non-positive entry.
  explicit ReactionSet(std::vector<double> times_ms);

  const std::vector<double>& times_ms() const { return times_ms_; }
  double max_ms() const { return max_ms_; }

 private:
  std::vector<double> times_ms_;
  double max_ms_ = 0.0;
};

struct Penalty {
  double z = 0.0;      // seconds, (m - r) / 1000
  double z_hat = 0.0;  // (m - r) / m, in [0, 1]
};

struct PsychAnnotation {
  std::string sample_id;
  double r_ms = 0.0;
  double z = 0.0;
  double z_hat = 0.0;
};

enum class PsychMode { kLiteral, kWeighted };

enum class EpsilonSource { kGreedyDecode, kFixed };

struct PsychLossConfig {
  PsychMode mode = PsychMode::kWeighted;
  double lambda = 1.0;
  EpsilonSource epsilon_source = EpsilonSource::kGreedyDecode;
  // Used when epsilon_source == kFixed.
  double fixed_epsilon = 0.0;
};

// Mean of per-character times. Throws EmptyMeasurements on an empty list and
// Error on a non-positive entry.
double LineReactionTime(std::span<const double> char_times_ms);

// Sink for non-fatal diagnostics (e.g. clamped late records). Defaults to
// stderr when unset.
using DiagnosticSink = std::function<void(const std::string&)>;

// Reaction times above the set maximum are clamped to it and reported.
Penalty ComputePenalty(double r_ms, const ReactionSet& set,
                       const DiagnosticSink& warn = nullptr);

PsychAnnotation Annotate(std::string sample_id, double r_ms, const ReactionSet& set,
                         const DiagnosticSink& warn = nullptr);

struct PsychLossResult {
  double loss = 0.0;
  Matrix grad;
  double weight = 1.0;  // gradient scale actually applied
};

// literal:  loss = ctc - lambda * epsilon * z, gradient unchanged.
// weighted: w = 1 + lambda * epsilon * z_hat, loss and gradient scaled by w.
// Throws NegativeEpsilon.
PsychLossResult PsychLoss(const CtcResult& ctc, double epsilon, const PsychAnnotation& ann,
                          const PsychLossConfig& cfg);

// CER of the greedy best-path decode of `grid` against `label`; a constant
// with respect to the parameters. Throws EmptyReference on an empty label.
double EpsilonForSample(const PosteriorGrid& grid, const LabelSeq& label,
                        const Alphabet& alphabet);

}  // namespace scriptorium

#endif  // SCRIPTORIUM_PSYCH_PSYCH_LOSS_H_
