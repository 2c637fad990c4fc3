// scriptorium/nnet/crnn.h

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

#ifndef SCRIPTORIUM_NNET_CRNN_H_
#define SCRIPTORIUM_NNET_CRNN_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scriptorium/ctc/ctc-loss.h"
#include "scriptorium/nnet/graph.h"
#include "scriptorium/nnet/tensor.h"

namespace scriptorium {
namespace nnet {

struct CrnnConfig {
  int height = 64;
  int conv1_filters = 8;
  int conv2_filters = 16;
  int hidden = 64;  // per direction
  int num_classes = 0;

  bool operator==(const CrnnConfig&) const = default;
};

struct Parameter {
  std::string name;
  Tensor value;
};

// Activations of one forward pass, kept for the backward sweep.
class ForwardPass {
 public:
  const PosteriorGrid& grid() const { return grid_; }
  Matrix logits() const { return graph_.value(logits_).ToMatrix(); }
  int frames() const { return static_cast<int>(grid_.rows()); }

  // upstream is d loss / d logits (pre-softmax), T x C. Gradients are added
  // into grads, which must hold one tensor per model parameter.
  void Backward(const Matrix& upstream, std::span<Tensor> grads);

 private:
  friend class Crnn;
  Graph graph_;
  Var logits_;
  PosteriorGrid grid_;
};

// Two conv(3x3) + relu + maxpool(2x2) stages, one bidirectional GRU over
// image columns, a linear projection to classes and a log-softmax.
// Output frames: ceil(width / 4).
class Crnn {
 public:
  Crnn() = default;
  // Glorot-uniform weights, zero biases, drawn from a generator seeded with
  // `seed`.
  Crnn(const CrnnConfig& config, uint64_t seed);
  // Adopts existing parameters; throws ShapeMismatch if they do not fit.
  Crnn(const CrnnConfig& config, std::vector<Parameter> params);

  const CrnnConfig& config() const { return config_; }
  std::vector<Parameter>& params() { return params_; }
  const std::vector<Parameter>& params() const { return params_; }
  std::size_t num_weights() const;

  // image is [height, W] with W >= 8 and values in [0,1]. Throws BadShape.
  ForwardPass Forward(const Tensor& image) const;
  PosteriorGrid Predict(const Tensor& image) const { return Forward(image).grid(); }

  // Forward followed by Backward; returns fresh gradients.
  std::vector<Tensor> Gradients(const Tensor& image, const Matrix& upstream) const;

  // Zero tensors matching each parameter.
  std::vector<Tensor> ZeroGradients() const;

  static int OutputFrames(int width) { return (width + 3) / 4; }

 private:
  static std::vector<Parameter> Layout(const CrnnConfig& config);
  CrnnConfig config_;
  std::vector<Parameter> params_;
};

}  // namespace nnet
}  // namespace scriptorium

#endif  // SCRIPTORIUM_NNET_CRNN_H_
