// tests/testing/gradcheck.h

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

#ifndef SCRIPTORIUM_TESTS_TESTING_GRADCHECK_H_
#define SCRIPTORIUM_TESTS_TESTING_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "scriptorium/base/matrix.h"

namespace scriptorium {
namespace testing {

// Entrywise |a - n| / max(|a|, |n|, floor). The floor keeps entries whose
// true value is zero from being judged on rounding noise alone.
inline double RelativeError(double analytic, double numeric, double floor = 1e-3) {
  double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

// Central differences of f at x, one coordinate at a time.
inline Matrix NumericGradient(const std::function<double(const Matrix&)>& f, Matrix x,
                              double h) {
  Matrix g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      double orig = x(i, j);
      x(i, j) = orig + h;
      double up = f(x);
      x(i, j) = orig - h;
      double down = f(x);
      x(i, j) = orig;
      g(i, j) = (up - down) / (2 * h);
    }
  return g;
}

inline double MaxRelativeError(const Matrix& analytic, const Matrix& numeric,
                               double floor = 1e-3) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < analytic.rows(); ++i)
    for (Eigen::Index j = 0; j < analytic.cols(); ++j)
      worst = std::max(worst, RelativeError(analytic(i, j), numeric(i, j), floor));
  return worst;
}

inline Matrix RandomLogits(std::mt19937_64& rng, int rows, int cols, double scale = 2.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

}  // namespace testing
}  // namespace scriptorium

#endif  // SCRIPTORIUM_TESTS_TESTING_GRADCHECK_H_
