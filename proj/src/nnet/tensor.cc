// src/nnet/tensor.cc

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

#include "scriptorium/nnet/tensor.h"

#include <algorithm>
#include <functional>
#include <numeric>

#include "scriptorium/base/error.h"

namespace scriptorium {
namespace nnet {

namespace {
std::size_t Product(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw BadShape("negative dimension in " + ShapeString(shape));
    n *= static_cast<std::size_t>(d);
  }
  return n;
}
}  // namespace

std::string ShapeString(const std::vector<int>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(std::vector<int> shape, double fill)
    : shape_(std::move(shape)), data_(Product(shape_), fill) {}

Tensor::Tensor(std::vector<int> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != Product(shape_))
    throw BadShape("tensor data of length " + std::to_string(data_.size()) +
                   " does not match shape " + ShapeString(shape_));
}

Tensor Tensor::FromMatrix(const Matrix& m) {
  Tensor t({static_cast<int>(m.rows()), static_cast<int>(m.cols())});
  t.AsMatrix(t.dim(0), t.dim(1)) = m;
  return t;
}

Matrix Tensor::ToMatrix() const {
  if (rank() != 2) throw BadShape("ToMatrix needs rank 2, got " + ShapeString(shape_));
  return AsMatrix(shape_[0], shape_[1]);
}

void Tensor::Fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void Tensor::Add(const Tensor& other) {
  if (!SameShape(other))
    throw ShapeMismatch("cannot add " + ShapeString(other.shape_) + " to " +
                        ShapeString(shape_));
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
}

void Tensor::Scale(double s) {
  for (double& v : data_) v *= s;
}

Eigen::Map<Matrix> Tensor::AsMatrix(int rows, int cols) {
  if (static_cast<std::size_t>(rows) * cols != data_.size())
    throw BadShape("cannot view " + ShapeString(shape_) + " as " + std::to_string(rows) +
                   "x" + std::to_string(cols));
  return Eigen::Map<Matrix>(data_.data(), rows, cols);
}

Eigen::Map<const Matrix> Tensor::AsMatrix(int rows, int cols) const {
  if (static_cast<std::size_t>(rows) * cols != data_.size())
    throw BadShape("cannot view " + ShapeString(shape_) + " as " + std::to_string(rows) +
                   "x" + std::to_string(cols));
  return Eigen::Map<const Matrix>(data_.data(), rows, cols);
}

}  // namespace nnet
}  // namespace scriptorium
