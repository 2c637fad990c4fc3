// scriptorium/ctc/ctc-loss.h

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

#ifndef SCRIPTORIUM_CTC_CTC_LOSS_H_
#define SCRIPTORIUM_CTC_CTC_LOSS_H_

#include "scriptorium/base/matrix.h"
#include "scriptorium/textcore/alphabet.h"

namespace scriptorium {

// T x C per-frame log-probabilities (nats); column 0 is blank.
using PosteriorGrid = Matrix;

// Throws BadShape unless every row exponentiates and sums to 1 within tol.
void CheckPosteriorGrid(const PosteriorGrid& grid, double tol = 1e-9);

struct CtcResult {
  double loss = 0.0;  // -log p(label | grid)
  Matrix grad;        // d loss / d pre-softmax logits, T x C
};

// Exact CTC by the alpha/beta recursions in log space. The gradient assumes
// grid = log_softmax(logits) and equals softmax - occupancy.
// Throws ImpossibleLabel when T < RequiredFrames(label) or the label
// probability is exactly zero.
CtcResult CtcLoss(const PosteriorGrid& grid, const LabelSeq& label);

// Per-frame class occupancy posteriors; rows sum to one.
Matrix AlignmentPosteriors(const PosteriorGrid& grid, const LabelSeq& label);

// Per-frame argmax followed by Collapse.
LabelSeq BestPath(const PosteriorGrid& grid);

// Verification oracle: enumerates all C^T frame paths and sums those whose
// collapse equals the label. Throws TooLarge when C^T > 1e7.
double CtcLossBruteForce(const PosteriorGrid& grid, const LabelSeq& label);

}  // namespace scriptorium

#endif  // SCRIPTORIUM_CTC_CTC_LOSS_H_
