// scriptorium/nnet/optimizer.h

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

#ifndef SCRIPTORIUM_NNET_OPTIMIZER_H_
#define SCRIPTORIUM_NNET_OPTIMIZER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scriptorium/nnet/tensor.h"

namespace scriptorium {
namespace nnet {

enum class OptimizerKind { kRmsProp, kAdadelta, kAdam };

std::string OptimizerName(OptimizerKind kind);
// Accepts "rmsprop", "adadelta", "adam"; throws Error otherwise.
OptimizerKind ParseOptimizer(const std::string& name);
double DefaultLearningRate(OptimizerKind kind);

// RMSProp: decay 0.9, eps 1e-8 inside the square root.
// Adam: betas (0.9, 0.999), eps 1e-8, bias-corrected.
// Adadelta: rho 0.95, eps 1e-6; lr scales the update.
struct OptimizerState {
  OptimizerKind kind = OptimizerKind::kRmsProp;
  int64_t step = 0;
  // RMSProp: second = E[g^2]. Adam: first = m, second = v.
  // Adadelta: first = E[dx^2], second = E[g^2].
  std::vector<Tensor> first;
  std::vector<Tensor> second;
};

OptimizerState MakeOptimizerState(OptimizerKind kind, std::span<const Tensor> params);

// Updates params in place. State slots are created on first use.
// Throws ShapeMismatch when params, grads and state disagree.
void OptimizerStep(OptimizerKind kind, std::span<Tensor> params, std::span<const Tensor> grads,
                   OptimizerState& state, double lr);

}  // namespace nnet
}  // namespace scriptorium

#endif  // SCRIPTORIUM_NNET_OPTIMIZER_H_
