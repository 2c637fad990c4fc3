// src/psych/psych-loss.cc

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

#include "scriptorium/psych/psych-loss.h"

#include <algorithm>
#include <iostream>
#include <numeric>

#include "scriptorium/base/error.h"
#include "scriptorium/textcore/edit-distance.h"

namespace scriptorium {

ReactionSet::ReactionSet(std::vector<double> times_ms) : times_ms_(std::move(times_ms)) {
  if (times_ms_.empty()) throw EmptyMeasurements("reaction set is empty");
  for (double r : times_ms_)
    if (!(r > 0.0)) throw Error("reaction times must be positive");
  std::sort(times_ms_.begin(), times_ms_.end());
  max_ms_ = times_ms_.back();
}

double LineReactionTime(std::span<const double> char_times_ms) {
  if (char_times_ms.empty()) throw EmptyMeasurements("no per-character times");
  for (double t : char_times_ms)
    if (!(t > 0.0)) throw Error("per-character times must be positive");
  return std::accumulate(char_times_ms.begin(), char_times_ms.end(), 0.0) /
         static_cast<double>(char_times_ms.size());
}

Penalty ComputePenalty(double r_ms, const ReactionSet& set, const DiagnosticSink& warn) {
  const double m = set.max_ms();
  if (r_ms > m) {
    std::string msg = "reaction time " + std::to_string(r_ms) +
                      " ms exceeds set maximum " + std::to_string(m) + " ms; clamped";
    if (warn)
      warn(msg);
    else
      std::cerr << "WARNING: " << msg << '\n';
    r_ms = m;
  }
  Penalty p;
  p.z = (m - r_ms) / 1000.0;
  p.z_hat = (m - r_ms) / m;
  return p;
}

PsychAnnotation Annotate(std::string sample_id, double r_ms, const ReactionSet& set,
                         const DiagnosticSink& warn) {
  Penalty p = ComputePenalty(r_ms, set, warn);
  PsychAnnotation ann;
  ann.sample_id = std::move(sample_id);
  ann.r_ms = std::min(r_ms, set.max_ms());
  ann.z = p.z;
  ann.z_hat = p.z_hat;
  return ann;
}

PsychLossResult PsychLoss(const CtcResult& ctc, double epsilon, const PsychAnnotation& ann,
                          const PsychLossConfig& cfg) {
  if (epsilon < 0.0) throw NegativeEpsilon("epsilon must be non-negative");
  if (cfg.lambda < 0.0) throw Error("lambda must be non-negative");
  PsychLossResult out;
  if (cfg.mode == PsychMode::kLiteral) {
    // -eps*z is piecewise constant in the parameters: no gradient term.
    out.loss = ctc.loss - cfg.lambda * epsilon * ann.z;
    out.grad = ctc.grad;
    return out;
  }
  out.weight = 1.0 + cfg.lambda * epsilon * ann.z_hat;
  out.loss = out.weight * ctc.loss;
  out.grad = out.weight * ctc.grad;
  return out;
}

double EpsilonForSample(const PosteriorGrid& grid, const LabelSeq& label,
                        const Alphabet& alphabet) {
  if (label.empty()) throw EmptyReference("epsilon needs a non-empty label");
  if (grid.cols() != alphabet.num_classes())
    throw BadShape("grid has " + std::to_string(grid.cols()) + " classes, alphabet needs " +
                   std::to_string(alphabet.num_classes()));
  LabelSeq hyp = BestPath(grid);
  return static_cast<double>(EditDistance(hyp, label)) / static_cast<double>(label.size());
}

}  // namespace scriptorium
