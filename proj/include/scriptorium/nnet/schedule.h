// scriptorium/nnet/schedule.h

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

#ifndef SCRIPTORIUM_NNET_SCHEDULE_H_
#define SCRIPTORIUM_NNET_SCHEDULE_H_

#include <cstdint>
#include <limits>

#include "scriptorium/nnet/optimizer.h"

namespace scriptorium {
namespace nnet {

struct TrainSchedule {
  int patience_lr = 15;    // non-improving epochs per learning-rate halving
  int patience_stop = 80;  // non-improving epochs before stopping
  int max_epochs = 1000;   // hard cap on top of early stopping
  OptimizerKind optimizer = OptimizerKind::kRmsProp;
  double base_lr = 5e-4;
  uint64_t seed = 1;
  int batch_size = 8;

  // Throws Error unless 0 < patience_lr <= patience_stop and the rest is sane.
  void Validate() const;
};

// Plateau logic on validation CER. An epoch improves when its CER is strictly
// below the best so far. Every patience_lr consecutive non-improving epochs
// the rate halves; after patience_stop of them training stops.
class PlateauTracker {
 public:
  explicit PlateauTracker(const TrainSchedule& schedule);

  struct Decision {
    bool improved = false;
    bool halved = false;
    bool stop = false;
  };
  Decision Observe(double val_cer);

  double lr() const { return lr_; }
  double best() const { return best_; }
  int epochs_without_improvement() const { return stale_; }

 private:
  int patience_lr_;
  int patience_stop_;
  double lr_;
  double best_ = std::numeric_limits<double>::infinity();
  int stale_ = 0;
};

}  // namespace nnet
}  // namespace scriptorium

#endif  // SCRIPTORIUM_NNET_SCHEDULE_H_
