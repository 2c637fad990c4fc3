// scriptorium/base/matrix.h

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

#ifndef SCRIPTORIUM_BASE_MATRIX_H_
#define SCRIPTORIUM_BASE_MATRIX_H_

#include <Eigen/Core>

namespace scriptorium {

// Row-major so that one frame of a posterior grid is contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Values below this are treated as log(0). Sums of two sentinels stay finite.
inline constexpr double kLogZero = -1e300;
inline constexpr double kLogZeroThreshold = -1e30;

inline bool IsLogZero(double x) { return x < kLogZeroThreshold; }

// log(exp(a) + exp(b)) with max subtraction.
double LogAdd(double a, double b);

// Row-wise log-softmax of logits.
Matrix LogSoftmaxRows(const Matrix& logits);

}  // namespace scriptorium

#endif  // SCRIPTORIUM_BASE_MATRIX_H_
