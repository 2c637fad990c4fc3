// src/ctc/ctc-loss.cc

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

#include "scriptorium/ctc/ctc-loss.h"

#include <cmath>
#include <string>
#include <vector>

#include "scriptorium/base/error.h"

namespace scriptorium {

namespace {

struct Lattice {
  int T = 0;
  int S = 0;                  // 2L + 1
  std::vector<int32_t> ext;   // blank-interleaved label
  Matrix alpha;               // includes emission at t
  Matrix beta;                // excludes emission at t
  double log_prob = kLogZero;
};

void CheckInputs(const PosteriorGrid& grid, const LabelSeq& label) {
  if (grid.rows() == 0 || grid.cols() < 1)
    throw BadShape("posterior grid must have at least one frame and one class");
  for (int32_t id : label)
    if (id <= kBlank || id >= grid.cols())
      throw BadShape("label id " + std::to_string(id) + " outside [1, " +
                     std::to_string(grid.cols() - 1) + "]");
  if (grid.rows() < RequiredFrames(label))
    throw ImpossibleLabel("label needs " + std::to_string(RequiredFrames(label)) +
                          " frames, grid has " + std::to_string(grid.rows()));
}

Lattice RunForwardBackward(const PosteriorGrid& y, const LabelSeq& label) {
  CheckInputs(y, label);
  Lattice lat;
  lat.T = static_cast<int>(y.rows());
  lat.S = 2 * static_cast<int>(label.size()) + 1;
  lat.ext.assign(lat.S, kBlank);
  for (std::size_t i = 0; i < label.size(); ++i) lat.ext[2 * i + 1] = label[i];

  const int T = lat.T, S = lat.S;
  const auto& ext = lat.ext;
  // s may skip from s-2 when ext[s] is a symbol differing from ext[s-2].
  auto can_skip = [&](int s) { return s >= 2 && ext[s] != kBlank && ext[s] != ext[s - 2]; };

  lat.alpha = Matrix::Constant(T, S, kLogZero);
  lat.alpha(0, 0) = y(0, ext[0]);
  if (S > 1) lat.alpha(0, 1) = y(0, ext[1]);
  for (int t = 1; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      double a = lat.alpha(t - 1, s);
      if (s >= 1) a = LogAdd(a, lat.alpha(t - 1, s - 1));
      if (can_skip(s)) a = LogAdd(a, lat.alpha(t - 1, s - 2));
      lat.alpha(t, s) = IsLogZero(a) ? kLogZero : a + y(t, ext[s]);
    }
  }

  lat.beta = Matrix::Constant(T, S, kLogZero);
  lat.beta(T - 1, S - 1) = 0.0;
  if (S > 1) lat.beta(T - 1, S - 2) = 0.0;
  for (int t = T - 2; t >= 0; --t) {
    for (int s = 0; s < S; ++s) {
      double b = lat.beta(t + 1, s) + y(t + 1, ext[s]);
      if (s + 1 < S) b = LogAdd(b, lat.beta(t + 1, s + 1) + y(t + 1, ext[s + 1]));
      if (s + 2 < S && can_skip(s + 2))
        b = LogAdd(b, lat.beta(t + 1, s + 2) + y(t + 1, ext[s + 2]));
      lat.beta(t, s) = IsLogZero(b) ? kLogZero : b;
    }
  }

  double lp = lat.alpha(T - 1, S - 1);
  if (S > 1) lp = LogAdd(lp, lat.alpha(T - 1, S - 2));
  if (IsLogZero(lp) || !std::isfinite(lp))
    throw ImpossibleLabel("label has zero probability under the grid");
  lat.log_prob = lp;
  return lat;
}

Matrix Occupancy(const PosteriorGrid& y, const Lattice& lat) {
  Matrix gamma = Matrix::Zero(lat.T, y.cols());
  for (int t = 0; t < lat.T; ++t) {
    for (int s = 0; s < lat.S; ++s) {
      double ab = lat.alpha(t, s) + lat.beta(t, s);
      if (IsLogZero(ab)) continue;
      gamma(t, lat.ext[s]) += std::exp(ab - lat.log_prob);
    }
  }
  return gamma;
}

}  // namespace

void CheckPosteriorGrid(const PosteriorGrid& grid, double tol) {
  if (grid.rows() == 0 || grid.cols() == 0) throw BadShape("empty posterior grid");
  for (Eigen::Index t = 0; t < grid.rows(); ++t) {
    double sum = grid.row(t).array().exp().sum();
    if (!std::isfinite(sum) || std::abs(sum - 1.0) > tol)
      throw BadShape("posterior row " + std::to_string(t) + " sums to " +
                     std::to_string(sum));
  }
}

CtcResult CtcLoss(const PosteriorGrid& grid, const LabelSeq& label) {
  Lattice lat = RunForwardBackward(grid, label);
  CtcResult res;
  res.loss = -lat.log_prob;
  res.grad = grid.array().exp().matrix() - Occupancy(grid, lat);
  return res;
}

Matrix AlignmentPosteriors(const PosteriorGrid& grid, const LabelSeq& label) {
  return Occupancy(grid, RunForwardBackward(grid, label));
}

LabelSeq BestPath(const PosteriorGrid& grid) {
  std::vector<int32_t> path(grid.rows());
  for (Eigen::Index t = 0; t < grid.rows(); ++t) {
    Eigen::Index best = 0;
    grid.row(t).maxCoeff(&best);
    path[t] = static_cast<int32_t>(best);
  }
  return Collapse(path);
}

double CtcLossBruteForce(const PosteriorGrid& grid, const LabelSeq& label) {
  const int T = static_cast<int>(grid.rows());
  const int C = static_cast<int>(grid.cols());
  double count = std::pow(static_cast<double>(C), T);
  if (count > 1e7) throw TooLarge("C^T = " + std::to_string(count) + " exceeds 1e7 paths");
  for (int32_t id : label)
    if (id <= kBlank || id >= C) throw BadShape("label id outside grid classes");

  std::vector<int32_t> path(T, 0);
  double total = kLogZero;
  const long long n = static_cast<long long>(count);
  for (long long code = 0; code < n; ++code) {
    long long rest = code;
    double lp = 0.0;
    for (int t = 0; t < T; ++t) {
      path[t] = static_cast<int32_t>(rest % C);
      rest /= C;
      lp += grid(t, path[t]);
    }
    if (Collapse(path) == label) total = LogAdd(total, lp);
  }
  if (IsLogZero(total)) throw ImpossibleLabel("no path collapses to the label");
  return -total;
}

}  // namespace scriptorium
