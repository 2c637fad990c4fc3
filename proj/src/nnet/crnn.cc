// src/nnet/crnn.cc

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

#include "scriptorium/nnet/crnn.h"

#include <cmath>
#include <random>

#include "scriptorium/base/error.h"
#include "scriptorium/nnet/ops.h"

namespace scriptorium {
namespace nnet {

namespace {

// Parameter slots, in Layout() order.
enum Slot {
  kConv1W, kConv1B, kConv2W, kConv2B,
  kFwdWx, kFwdWh, kFwdBx, kFwdBh,
  kBwdWx, kBwdWh, kBwdBx, kBwdBh,
  kOutW, kOutB, kNumSlots
};

int FeatureDim(const CrnnConfig& c) { return c.conv2_filters * ((c.height + 3) / 4); }

}  // namespace

std::vector<Parameter> Crnn::Layout(const CrnnConfig& c) {
  if (c.height < 4 || c.conv1_filters < 1 || c.conv2_filters < 1 || c.hidden < 1 ||
      c.num_classes < 2)
    throw BadShape("invalid CRNN configuration");
  const int d = FeatureDim(c), h = c.hidden;
  std::vector<Parameter> p;
  p.push_back({"conv1.weight", Tensor({c.conv1_filters, 1, 3, 3})});
  p.push_back({"conv1.bias", Tensor({c.conv1_filters})});
  p.push_back({"conv2.weight", Tensor({c.conv2_filters, c.conv1_filters, 3, 3})});
  p.push_back({"conv2.bias", Tensor({c.conv2_filters})});
  for (const char* dir : {"gru_fwd", "gru_bwd"}) {
    std::string pre(dir);
    p.push_back({pre + ".input_weight", Tensor({3 * h, d})});
    p.push_back({pre + ".hidden_weight", Tensor({3 * h, h})});
    p.push_back({pre + ".input_bias", Tensor({3 * h})});
    p.push_back({pre + ".hidden_bias", Tensor({3 * h})});
  }
  p.push_back({"output.weight", Tensor({c.num_classes, 2 * h})});
  p.push_back({"output.bias", Tensor({c.num_classes})});
  return p;
}

Crnn::Crnn(const CrnnConfig& config, uint64_t seed) : config_(config), params_(Layout(config)) {
  std::mt19937_64 rng(seed);
  for (Parameter& p : params_) {
    if (p.value.rank() == 1) continue;  // biases stay zero
    int fan_in, fan_out;
    if (p.value.rank() == 4) {
      fan_in = p.value.dim(1) * 9;
      fan_out = p.value.dim(0) * 9;
    } else {
      fan_in = p.value.dim(1);
      fan_out = p.value.dim(0);
    }
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& v : p.value.values()) v = dist(rng);
  }
}

Crnn::Crnn(const CrnnConfig& config, std::vector<Parameter> params)
    : config_(config), params_(Layout(config)) {
  if (params.size() != params_.size())
    throw ShapeMismatch("expected " + std::to_string(params_.size()) + " parameters, got " +
                        std::to_string(params.size()));
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].name != params_[i].name || !params[i].value.SameShape(params_[i].value))
      throw ShapeMismatch("parameter " + params[i].name + " " +
                          ShapeString(params[i].value.shape()) + " does not fit " +
                          params_[i].name + " " + ShapeString(params_[i].value.shape()));
    params_[i].value = std::move(params[i].value);
  }
}

std::size_t Crnn::num_weights() const {
  std::size_t n = 0;
  for (const Parameter& p : params_) n += p.value.size();
  return n;
}

std::vector<Tensor> Crnn::ZeroGradients() const {
  std::vector<Tensor> grads;
  grads.reserve(params_.size());
  for (const Parameter& p : params_) grads.emplace_back(p.value.shape());
  return grads;
}

ForwardPass Crnn::Forward(const Tensor& image) const {
  if (image.rank() != 2 || image.dim(0) != config_.height || image.dim(1) < 8)
    throw BadShape("CRNN input must be [" + std::to_string(config_.height) +
                   ", W>=8], got " + ShapeString(image.shape()));
  ForwardPass pass;
  Graph& g = pass.graph_;
  std::vector<Var> p(kNumSlots);
  for (int s = 0; s < kNumSlots; ++s) p[s] = g.Parameter(params_[s].value, s);

  Var x = g.Constant(Tensor({1, image.dim(0), image.dim(1)}, image.storage()));
  x = MaxPool2x2(g, Relu(g, Conv3x3(g, x, p[kConv1W], p[kConv1B])));
  x = MaxPool2x2(g, Relu(g, Conv3x3(g, x, p[kConv2W], p[kConv2B])));
  Var frames = ColumnsToFrames(g, x);
  Var fwd = Gru(g, frames, p[kFwdWx], p[kFwdWh], p[kFwdBx], p[kFwdBh], false);
  Var bwd = Gru(g, frames, p[kBwdWx], p[kBwdWh], p[kBwdBx], p[kBwdBh], true);
  pass.logits_ = Linear(g, ConcatColumns(g, fwd, bwd), p[kOutW], p[kOutB]);
  pass.grid_ = LogSoftmaxRows(g.value(pass.logits_).ToMatrix());
  return pass;
}

void ForwardPass::Backward(const Matrix& upstream, std::span<Tensor> grads) {
  if (upstream.rows() != grid_.rows() || upstream.cols() != grid_.cols())
    throw BadShape("upstream gradient is " + std::to_string(upstream.rows()) + "x" +
                   std::to_string(upstream.cols()) + ", forward output is " +
                   std::to_string(grid_.rows()) + "x" + std::to_string(grid_.cols()));
  if (grads.size() != kNumSlots) throw ShapeMismatch("gradient list has wrong length");
  graph_.Backward(logits_, Tensor::FromMatrix(upstream), grads);
}

std::vector<Tensor> Crnn::Gradients(const Tensor& image, const Matrix& upstream) const {
  ForwardPass pass = Forward(image);
  std::vector<Tensor> grads = ZeroGradients();
  pass.Backward(upstream, grads);
  return grads;
}

}  // namespace nnet
}  // namespace scriptorium
