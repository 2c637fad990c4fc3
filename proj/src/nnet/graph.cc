// src/nnet/graph.cc

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

#include "scriptorium/nnet/graph.h"

#include "scriptorium/base/error.h"

namespace scriptorium {
namespace nnet {

Var Graph::Constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var{size() - 1};
}

Var Graph::Parameter(Tensor value, int slot) {
  Node n;
  n.value = std::move(value);
  n.param_slot = slot;
  n.needs_grad = true;
  nodes_.push_back(std::move(n));
  return Var{size() - 1};
}

Var Graph::Apply(Tensor value, std::vector<Var> inputs, BackwardFn backward) {
  Node n;
  n.value = std::move(value);
  for (Var in : inputs) n.needs_grad = n.needs_grad || nodes_.at(in.id).needs_grad;
  n.inputs = std::move(inputs);
  n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{size() - 1};
}

Tensor& Graph::MutableGrad(Var v) {
  Node& n = nodes_.at(v.id);
  if (n.grad.empty() && !n.value.empty()) n.grad = Tensor(n.value.shape());
  return n.grad;
}

void Graph::Backward(Var out, const Tensor& seed, std::span<Tensor> param_grads) {
  if (!seed.SameShape(value(out)))
    throw BadShape("backward seed " + ShapeString(seed.shape()) + " does not match output " +
                   ShapeString(value(out).shape()));
  for (Node& n : nodes_) n.grad = Tensor();
  nodes_[out.id].grad = seed;
  for (int id = out.id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.needs_grad || n.grad.empty()) continue;
    if (n.backward) n.backward(*this, id);
    if (n.param_slot >= 0) {
      if (static_cast<std::size_t>(n.param_slot) >= param_grads.size())
        throw ShapeMismatch("parameter slot out of range");
      param_grads[n.param_slot].Add(n.grad);
    }
  }
}

}  // namespace nnet
}  // namespace scriptorium
