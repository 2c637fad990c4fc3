// scriptorium/nnet/graph.h

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

#ifndef SCRIPTORIUM_NNET_GRAPH_H_
#define SCRIPTORIUM_NNET_GRAPH_H_

#include <functional>
#include <span>
#include <vector>

#include "scriptorium/nnet/tensor.h"

namespace scriptorium {
namespace nnet {

class Graph;

// Handle to a node of a Graph.
struct Var {
  int id = -1;
};

// Reverse-mode tape. Nodes are appended in evaluation order, so a reverse
// sweep over ids visits every node after all of its consumers.
class Graph {
 public:
  // Receives the graph and the node's own id; must accumulate into the
  // gradients of the node's inputs via MutableGrad().
  using BackwardFn = std::function<void(Graph&, int)>;

  Var Constant(Tensor value);
  // A trainable leaf; after Backward its gradient is added to
  // param_grads[slot].
  Var Parameter(Tensor value, int slot);
  Var Apply(Tensor value, std::vector<Var> inputs, BackwardFn backward);

  const Tensor& value(Var v) const { return nodes_.at(v.id).value; }
  bool needs_grad(Var v) const { return nodes_.at(v.id).needs_grad; }
  const std::vector<Var>& inputs(int id) const { return nodes_.at(id).inputs; }
  // Zero-initialized on first access.
  Tensor& MutableGrad(Var v);
  const Tensor& grad(Var v) const { return nodes_.at(v.id).grad; }

  // Seeds d(out) = seed and sweeps the tape. Throws BadShape on a seed of the
  // wrong shape.
  void Backward(Var out, const Tensor& seed, std::span<Tensor> param_grads);

  int size() const { return static_cast<int>(nodes_.size()); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::vector<Var> inputs;
    BackwardFn backward;
    int param_slot = -1;
    bool needs_grad = false;
  };
  std::vector<Node> nodes_;
};

}  // namespace nnet
}  // namespace scriptorium

#endif  // SCRIPTORIUM_NNET_GRAPH_H_
