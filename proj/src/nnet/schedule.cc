// src/nnet/schedule.cc

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

#include "scriptorium/nnet/schedule.h"

#include "scriptorium/base/error.h"

namespace scriptorium {
namespace nnet {

void TrainSchedule::Validate() const {
  if (!(patience_lr > 0 && patience_lr <= patience_stop))
    throw Error("schedule needs 0 < patience_lr <= patience_stop");
  if (max_epochs < 1) throw Error("max_epochs must be positive");
  if (!(base_lr > 0.0)) throw Error("base learning rate must be positive");
  if (batch_size < 1) throw Error("batch size must be positive");
}

PlateauTracker::PlateauTracker(const TrainSchedule& schedule)
    : patience_lr_(schedule.patience_lr),
      patience_stop_(schedule.patience_stop),
      lr_(schedule.base_lr) {
  schedule.Validate();
}

PlateauTracker::Decision PlateauTracker::Observe(double val_cer) {
  Decision d;
  if (val_cer < best_) {
    best_ = val_cer;
    stale_ = 0;
    d.improved = true;
    return d;
  }
  ++stale_;
  if (stale_ % patience_lr_ == 0) {
    lr_ *= 0.5;
    d.halved = true;
  }
  d.stop = stale_ >= patience_stop_;
  return d;
}

}  // namespace nnet
}  // namespace scriptorium
