// scriptorium/nnet/tensor.h

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

#ifndef SCRIPTORIUM_NNET_TENSOR_H_
#define SCRIPTORIUM_NNET_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "scriptorium/base/matrix.h"

namespace scriptorium {
namespace nnet {

// Dense row-major float64 array.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape, double fill = 0.0);
  // Throws BadShape if data.size() != product of shape.
  Tensor(std::vector<int> shape, std::vector<double> data);

  static Tensor FromMatrix(const Matrix& m);
  Matrix ToMatrix() const;  // rank 2 only

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_.at(i); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  const std::vector<double>& storage() const { return data_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * shape_[1] + j]; }
  double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * shape_[1] + j]; }
  double& at(int c, int i, int j) {
    return data_[(static_cast<std::size_t>(c) * shape_[1] + i) * shape_[2] + j];
  }
  double at(int c, int i, int j) const {
    return data_[(static_cast<std::size_t>(c) * shape_[1] + i) * shape_[2] + j];
  }

  void Fill(double v);
  bool SameShape(const Tensor& other) const { return shape_ == other.shape_; }
  void Add(const Tensor& other);  // throws ShapeMismatch
  void Scale(double s);

  // Views as a rows x cols row-major matrix; rows * cols must equal size().
  Eigen::Map<Matrix> AsMatrix(int rows, int cols);
  Eigen::Map<const Matrix> AsMatrix(int rows, int cols) const;

  bool operator==(const Tensor& other) const {
    return shape_ == other.shape_ && data_ == other.data_;
  }

 private:
  std::vector<int> shape_;
  std::vector<double> data_;
};

std::string ShapeString(const std::vector<int>& shape);

}  // namespace nnet
}  // namespace scriptorium

#endif  // SCRIPTORIUM_NNET_TENSOR_H_
