// src/nnet/trainer.cc

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

#include "scriptorium/nnet/trainer.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "scriptorium/base/error.h"
#include "scriptorium/ctc/ctc-loss.h"

namespace scriptorium {
namespace nnet {

namespace {

void CheckSplit(const std::vector<TrainingSample>& split, const char* name,
                const Alphabet& alphabet, int height) {
  if (split.empty()) throw EmptySplit(std::string(name) + " split is empty");
  for (const TrainingSample& s : split) {
    for (int32_t id : s.label)
      if (id < 1 || id >= alphabet.num_classes())
        throw AlphabetMismatch("sample " + s.id + " has label id " + std::to_string(id) +
                               " outside an alphabet of " + std::to_string(alphabet.size()) +
                               " symbols");
    if (s.image.rank() != 2 || s.image.dim(0) != height)
      throw BadShape("sample " + s.id + " image is " + ShapeString(s.image.shape()) +
                     ", expected height " + std::to_string(height));
    if (RequiredFrames(s.label) > Crnn::OutputFrames(s.image.dim(1)))
      throw ImpossibleLabel("sample " + s.id + " is too narrow for its label");
  }
}

// Loss and d loss / d logits for one sample under the configured objective.
struct SampleLoss {
  double loss;
  Matrix grad;
};

SampleLoss ComputeSampleLoss(const PosteriorGrid& grid, const TrainingSample& sample,
                             const Alphabet& alphabet, const TrainOptions& options) {
  CtcResult ctc = CtcLoss(grid, sample.label);
  if (options.loss == LossKind::kCtc || !sample.psych) return {ctc.loss, std::move(ctc.grad)};
  double epsilon = options.psych.epsilon_source == EpsilonSource::kFixed
                       ? options.psych.fixed_epsilon
                       : EpsilonForSample(grid, sample.label, alphabet);
  PsychLossResult r = PsychLoss(ctc, epsilon, *sample.psych, options.psych);
  return {r.loss, std::move(r.grad)};
}

}  // namespace

ErrorCounts EvaluateGreedy(const Crnn& model, const Alphabet& alphabet,
                           const std::vector<TrainingSample>& samples) {
  ErrorCounts counts;
  for (const TrainingSample& s : samples)
    counts.Add(alphabet.DecodeUtf8(BestPath(model.Predict(s.image))),
               alphabet.DecodeUtf8(s.label));
  return counts;
}

TrainResult Train(const TrainingData& data, const TrainOptions& options) {
  const TrainSchedule& schedule = options.schedule;
  schedule.Validate();
  CrnnConfig config = options.model;
  config.num_classes = data.alphabet.num_classes();
  CheckSplit(data.train, "train", data.alphabet, config.height);
  CheckSplit(data.validation, "validation", data.alphabet, config.height);

  Crnn model(config, schedule.seed);
  std::vector<Tensor> params;
  for (const Parameter& p : model.params()) params.push_back(p.value);
  OptimizerState opt = MakeOptimizerState(schedule.optimizer, params);
  PlateauTracker tracker(schedule);
  std::mt19937_64 rng(schedule.seed);

  TrainResult result;
  result.best = {data.alphabet, model, opt};
  std::vector<int> order(data.train.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= schedule.max_epochs; ++epoch) {
    const double lr = tracker.lr();
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += schedule.batch_size) {
      const std::size_t end = std::min(order.size(), start + schedule.batch_size);
      std::vector<Tensor> grads = model.ZeroGradients();
      // Samples are processed one at a time at their true width and the
      // gradients summed in batch order.
      for (std::size_t k = start; k < end; ++k) {
        const TrainingSample& sample = data.train[order[k]];
        ForwardPass pass = model.Forward(sample.image);
        SampleLoss sl = ComputeSampleLoss(pass.grid(), sample, data.alphabet, options);
        loss_sum += sl.loss;
        pass.Backward(sl.grad, grads);
      }
      OptimizerStep(schedule.optimizer, params, grads, opt, lr);
      for (std::size_t i = 0; i < params.size(); ++i) model.params()[i].value = params[i];
    }

    ErrorCounts val = EvaluateGreedy(model, data.alphabet, data.validation);
    EpochRecord record{epoch, loss_sum / static_cast<double>(order.size()), val.cer(), val.wer(),
                       lr};
    result.history.push_back(record);
    PlateauTracker::Decision d = tracker.Observe(record.val_cer);
    if (d.improved) {
      result.best = {data.alphabet, model, opt};
      result.best_epoch = epoch;
    }
    if (options.on_epoch) options.on_epoch(record);
    if (d.stop) break;
    if (options.stop_when && options.stop_when(record)) break;
  }
  return result;
}

}  // namespace nnet
}  // namespace scriptorium
