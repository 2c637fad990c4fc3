// scriptorium/nnet/ops.h

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

#ifndef SCRIPTORIUM_NNET_OPS_H_
#define SCRIPTORIUM_NNET_OPS_H_

#include "scriptorium/nnet/graph.h"

namespace scriptorium {
namespace nnet {

// x [Cin,H,W], weight [Cout,Cin,3,3], bias [Cout] -> [Cout,H,W]; stride 1,
// zero padding 1.
Var Conv3x3(Graph& g, Var x, Var weight, Var bias);

// 2x2 max pooling, stride 2, ceil mode: [C,H,W] -> [C,ceil(H/2),ceil(W/2)].
Var MaxPool2x2(Graph& g, Var x);

Var Relu(Graph& g, Var x);

// [C,H,W] -> [W, C*H]; frame t holds column t of every channel, channel-major.
Var ColumnsToFrames(Graph& g, Var x);

// x [T,D], weight [O,D], bias [O] -> [T,O].
Var Linear(Graph& g, Var x, Var weight, Var bias);

// One direction of a gated recurrent unit over x [T,D] with h0 = 0.
// input_weight [3H,D] and hidden_weight [3H,H] stack the reset, update and
// candidate gates in that order; biases are [3H]. Returns [T,H], indexed by
// input frame regardless of direction.
Var Gru(Graph& g, Var x, Var input_weight, Var hidden_weight, Var input_bias,
        Var hidden_bias, bool reverse);

// [T,A], [T,B] -> [T,A+B].
Var ConcatColumns(Graph& g, Var a, Var b);

// Row-wise log-softmax of [T,C].
Var LogSoftmax(Graph& g, Var x);

}  // namespace nnet
}  // namespace scriptorium

#endif  // SCRIPTORIUM_NNET_OPS_H_
