// scriptorium/nnet/trainer.h

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

#ifndef SCRIPTORIUM_NNET_TRAINER_H_
#define SCRIPTORIUM_NNET_TRAINER_H_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scriptorium/nnet/checkpoint.h"
#include "scriptorium/nnet/crnn.h"
#include "scriptorium/nnet/schedule.h"
#include "scriptorium/psych/psych-loss.h"
#include "scriptorium/textcore/alphabet.h"
#include "scriptorium/textcore/edit-distance.h"

namespace scriptorium {
namespace nnet {

// One line image with its label and, when it was timed by an annotator, the
// psychophysical penalty derived from the reaction time.
struct TrainingSample {
  std::string id;
  Tensor image;  // [height, width], ink in [0, 1]
  LabelSeq label;
  std::optional<PsychAnnotation> psych;
};

struct TrainingData {
  Alphabet alphabet;
  std::vector<TrainingSample> train;
  std::vector<TrainingSample> validation;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;  // mean per-sample loss over the epoch
  double val_cer = 0.0;
  double val_wer = 0.0;
  double lr = 0.0;  // learning rate used during the epoch

  bool operator==(const EpochRecord&) const = default;
};

enum class LossKind { kCtc, kPsych };

struct TrainOptions {
  TrainSchedule schedule;
  LossKind loss = LossKind::kCtc;
  PsychLossConfig psych;
  CrnnConfig model;  // num_classes is taken from the alphabet
  // Called after every epoch with the record just appended to the history.
  std::function<void(const EpochRecord&)> on_epoch;
  // Optional: return true to end training after this epoch (e.g. a target CER
  // was reached). Checked after the plateau schedule's own stopping rule.
  std::function<bool(const EpochRecord&)> stop_when;
};


struct TrainResult {
  Checkpoint best;  // model with the lowest validation CER
  int best_epoch = 0;
  std::vector<EpochRecord> history;
};

// Trains a fresh model seeded with options.schedule.seed. Throws EmptySplit
// when either split is empty, AlphabetMismatch when a label does not fit the
// alphabet, and ImpossibleLabel when an image is too narrow for its label.
TrainResult Train(const TrainingData& data, const TrainOptions& options);

// Greedy-decoded error counts of `model` over `samples`.
ErrorCounts EvaluateGreedy(const Crnn& model, const Alphabet& alphabet,
                           const std::vector<TrainingSample>& samples);

}  // namespace nnet
}  // namespace scriptorium

#endif  // SCRIPTORIUM_NNET_TRAINER_H_
