// src/nnet/optimizer.cc

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

#include "scriptorium/nnet/optimizer.h"

#include <cmath>

#include "scriptorium/base/error.h"

namespace scriptorium {
namespace nnet {

namespace {
constexpr double kRmsDecay = 0.9;
constexpr double kRmsEps = 1e-8;
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;
constexpr double kAdadeltaRho = 0.95;
constexpr double kAdadeltaEps = 1e-6;
}  // namespace

std::string OptimizerName(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kRmsProp: return "rmsprop";
    case OptimizerKind::kAdadelta: return "adadelta";
    case OptimizerKind::kAdam: return "adam";
  }
  return "unknown";
}

OptimizerKind ParseOptimizer(const std::string& name) {
  if (name == "rmsprop") return OptimizerKind::kRmsProp;
  if (name == "adadelta") return OptimizerKind::kAdadelta;
  if (name == "adam") return OptimizerKind::kAdam;
  throw Error("unknown optimizer '" + name + "'");
}

double DefaultLearningRate(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kRmsProp: return 5e-4;
    case OptimizerKind::kAdadelta: return 1.0;
    case OptimizerKind::kAdam: return 1e-3;
  }
  return 1e-3;
}

OptimizerState MakeOptimizerState(OptimizerKind kind, std::span<const Tensor> params) {
  OptimizerState st;
  st.kind = kind;
  for (const Tensor& p : params) {
    st.first.emplace_back(p.shape());
    st.second.emplace_back(p.shape());
  }
  return st;
}

void OptimizerStep(OptimizerKind kind, std::span<Tensor> params, std::span<const Tensor> grads,
                   OptimizerState& state, double lr) {
  if (params.size() != grads.size())
    throw ShapeMismatch("optimizer got " + std::to_string(params.size()) + " params and " +
                        std::to_string(grads.size()) + " grads");
  if (state.first.empty() && state.second.empty()) {
    state = MakeOptimizerState(kind, std::span<const Tensor>(params.data(), params.size()));
  }
  if (state.kind != kind) throw ShapeMismatch("optimizer state belongs to another optimizer");
  if (state.first.size() != params.size() || state.second.size() != params.size())
    throw ShapeMismatch("optimizer state does not match parameter count");
  for (std::size_t i = 0; i < params.size(); ++i)
    if (!params[i].SameShape(grads[i]) || !params[i].SameShape(state.first[i]) ||
        !params[i].SameShape(state.second[i]))
      throw ShapeMismatch("shape mismatch at parameter " + std::to_string(i) + ": " +
                          ShapeString(params[i].shape()) + " vs grad " +
                          ShapeString(grads[i].shape()));

  ++state.step;
  const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    double* p = params[i].data();
    const double* g = grads[i].data();
    double* m = state.first[i].data();
    double* v = state.second[i].data();
    const std::size_t n = params[i].size();
    switch (kind) {
      case OptimizerKind::kRmsProp:
        for (std::size_t k = 0; k < n; ++k) {
          v[k] = kRmsDecay * v[k] + (1.0 - kRmsDecay) * g[k] * g[k];
          p[k] -= lr * g[k] / std::sqrt(v[k] + kRmsEps);
        }
        break;
      case OptimizerKind::kAdam:
        for (std::size_t k = 0; k < n; ++k) {
          m[k] = kAdamBeta1 * m[k] + (1.0 - kAdamBeta1) * g[k];
          v[k] = kAdamBeta2 * v[k] + (1.0 - kAdamBeta2) * g[k] * g[k];
          p[k] -= lr * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + kAdamEps);
        }
        break;
      case OptimizerKind::kAdadelta:
        for (std::size_t k = 0; k < n; ++k) {
          v[k] = kAdadeltaRho * v[k] + (1.0 - kAdadeltaRho) * g[k] * g[k];
          double delta = -std::sqrt(m[k] + kAdadeltaEps) / std::sqrt(v[k] + kAdadeltaEps) * g[k];
          m[k] = kAdadeltaRho * m[k] + (1.0 - kAdadeltaRho) * delta * delta;
          p[k] += lr * delta;
        }
        break;
    }
  }
}

}  // namespace nnet
}  // namespace scriptorium
