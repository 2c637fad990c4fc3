// src/nnet/ops.cc

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

#include "scriptorium/nnet/ops.h"

#include <cmath>
#include <memory>

#include "scriptorium/base/error.h"

namespace scriptorium {
namespace nnet {

namespace {

void ExpectShape(const Tensor& t, const std::vector<int>& shape, const char* what) {
  if (t.shape() != shape)
    throw BadShape(std::string(what) + ": expected " + ShapeString(shape) + ", got " +
                   ShapeString(t.shape()));
}

void ExpectRank(const Tensor& t, int rank, const char* what) {
  if (t.rank() != rank)
    throw BadShape(std::string(what) + ": expected rank " + std::to_string(rank) + ", got " +
                   ShapeString(t.shape()));
}

inline double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Reductions run in a fixed order: vectorized Eigen sums depend on buffer
// alignment, which would make gradients differ between identical runs.
template <typename M>
double SequentialRowSum(const M& m, Eigen::Index row) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) s += m(row, j);
  return s;
}

template <typename M>
void AddColumnSums(const M& m, double* out) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[j] += m(i, j);
}

}  // namespace

Var Conv3x3(Graph& g, Var x, Var weight, Var bias) {
  const Tensor& in = g.value(x);
  ExpectRank(in, 3, "Conv3x3 input");
  const int cin = in.dim(0), h = in.dim(1), w = in.dim(2);
  const Tensor& wt = g.value(weight);
  ExpectRank(wt, 4, "Conv3x3 weight");
  const int cout = wt.dim(0);
  ExpectShape(wt, {cout, cin, 3, 3}, "Conv3x3 weight");
  ExpectShape(g.value(bias), {cout}, "Conv3x3 bias");
  const int k = cin * 9, hw = h * w;

  auto cols = std::make_shared<Matrix>(Matrix::Zero(k, hw));
  for (int ci = 0; ci < cin; ++ci)
    for (int ky = 0; ky < 3; ++ky)
      for (int kx = 0; kx < 3; ++kx) {
        double* row = cols->row((ci * 3 + ky) * 3 + kx).data();
        for (int y = 0; y < h; ++y) {
          int sy = y + ky - 1;
          if (sy < 0 || sy >= h) continue;
          const double* src = in.data() + (static_cast<std::size_t>(ci) * h + sy) * w;
          double* dst = row + static_cast<std::size_t>(y) * w;
          int x0 = std::max(0, 1 - kx), x1 = std::min(w, w + 1 - kx);
          for (int xx = x0; xx < x1; ++xx) dst[xx] = src[xx + kx - 1];
        }
      }

  Tensor out({cout, h, w});
  auto om = out.AsMatrix(cout, hw);
  om.noalias() = wt.AsMatrix(cout, k) * (*cols);
  const Tensor& b = g.value(bias);
  for (int c = 0; c < cout; ++c) om.row(c).array() += b[c];

  return g.Apply(std::move(out), {x, weight, bias},
                 [=](Graph& gr, int self) {
                   auto d_out = gr.grad(Var{self}).AsMatrix(cout, hw);
                   if (gr.needs_grad(weight))
                     gr.MutableGrad(weight).AsMatrix(cout, k).noalias() +=
                         d_out * cols->transpose();
                   if (gr.needs_grad(bias)) {
                     Tensor& db = gr.MutableGrad(bias);
                     for (int c = 0; c < cout; ++c) db[c] += SequentialRowSum(d_out, c);
                   }
                   if (gr.needs_grad(x)) {
                     Matrix d_cols = gr.value(weight).AsMatrix(cout, k).transpose() * d_out;
                     Tensor& dx = gr.MutableGrad(x);
                     for (int ci = 0; ci < cin; ++ci)
                       for (int ky = 0; ky < 3; ++ky)
                         for (int kx = 0; kx < 3; ++kx) {
                           const double* row = d_cols.row((ci * 3 + ky) * 3 + kx).data();
                           for (int y = 0; y < h; ++y) {
                             int sy = y + ky - 1;
                             if (sy < 0 || sy >= h) continue;
                             double* dst = dx.data() + (static_cast<std::size_t>(ci) * h + sy) * w;
                             const double* src = row + static_cast<std::size_t>(y) * w;
                             int x0 = std::max(0, 1 - kx), x1 = std::min(w, w + 1 - kx);
                             for (int xx = x0; xx < x1; ++xx) dst[xx + kx - 1] += src[xx];
                           }
                         }
                   }
                 });
}

Var MaxPool2x2(Graph& g, Var x) {
  const Tensor& in = g.value(x);
  ExpectRank(in, 3, "MaxPool2x2 input");
  const int c = in.dim(0), h = in.dim(1), w = in.dim(2);
  const int ho = (h + 1) / 2, wo = (w + 1) / 2;
  Tensor out({c, ho, wo});
  auto argmax = std::make_shared<std::vector<std::size_t>>(out.size());
  std::size_t o = 0;
  for (int ch = 0; ch < c; ++ch)
    for (int oy = 0; oy < ho; ++oy)
      for (int ox = 0; ox < wo; ++ox, ++o) {
        std::size_t best = (static_cast<std::size_t>(ch) * h + 2 * oy) * w + 2 * ox;
        for (int dy = 0; dy < 2; ++dy)
          for (int dx = 0; dx < 2; ++dx) {
            int y = 2 * oy + dy, xx = 2 * ox + dx;
            if (y >= h || xx >= w) continue;
            std::size_t idx = (static_cast<std::size_t>(ch) * h + y) * w + xx;
            if (in[idx] > in[best]) best = idx;
          }
        (*argmax)[o] = best;
        out[o] = in[best];
      }
  return g.Apply(std::move(out), {x}, [=](Graph& gr, int self) {
    const Tensor& d_out = gr.grad(Var{self});
    Tensor& dx = gr.MutableGrad(x);
    for (std::size_t i = 0; i < d_out.size(); ++i) dx[(*argmax)[i]] += d_out[i];
  });
}

Var Relu(Graph& g, Var x) {
  Tensor out = g.value(x);
  for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
  return g.Apply(std::move(out), {x}, [=](Graph& gr, int self) {
    const Tensor& in = gr.value(x);
    const Tensor& d_out = gr.grad(Var{self});
    Tensor& dx = gr.MutableGrad(x);
    for (std::size_t i = 0; i < in.size(); ++i)
      if (in[i] > 0.0) dx[i] += d_out[i];
  });
}

Var ColumnsToFrames(Graph& g, Var x) {
  const Tensor& in = g.value(x);
  ExpectRank(in, 3, "ColumnsToFrames input");
  const int c = in.dim(0), h = in.dim(1), w = in.dim(2);
  Tensor out({w, c * h});
  for (int ch = 0; ch < c; ++ch)
    for (int y = 0; y < h; ++y)
      for (int t = 0; t < w; ++t) out.at(t, ch * h + y) = in.at(ch, y, t);
  return g.Apply(std::move(out), {x}, [=](Graph& gr, int self) {
    const Tensor& d_out = gr.grad(Var{self});
    Tensor& dx = gr.MutableGrad(x);
    for (int ch = 0; ch < c; ++ch)
      for (int y = 0; y < h; ++y)
        for (int t = 0; t < w; ++t) dx.at(ch, y, t) += d_out.at(t, ch * h + y);
  });
}

Var Linear(Graph& g, Var x, Var weight, Var bias) {
  const Tensor& in = g.value(x);
  ExpectRank(in, 2, "Linear input");
  const int t = in.dim(0), d = in.dim(1);
  const Tensor& wt = g.value(weight);
  ExpectRank(wt, 2, "Linear weight");
  const int o = wt.dim(0);
  ExpectShape(wt, {o, d}, "Linear weight");
  ExpectShape(g.value(bias), {o}, "Linear bias");
  Tensor out({t, o});
  auto om = out.AsMatrix(t, o);
  om.noalias() = in.AsMatrix(t, d) * wt.AsMatrix(o, d).transpose();
  om.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(g.value(bias).data(), o);
  return g.Apply(std::move(out), {x, weight, bias}, [=](Graph& gr, int self) {
    auto d_out = gr.grad(Var{self}).AsMatrix(t, o);
    if (gr.needs_grad(weight))
      gr.MutableGrad(weight).AsMatrix(o, d).noalias() +=
          d_out.transpose() * gr.value(x).AsMatrix(t, d);
    if (gr.needs_grad(bias))
      AddColumnSums(d_out, gr.MutableGrad(bias).data());
    if (gr.needs_grad(x))
      gr.MutableGrad(x).AsMatrix(t, d).noalias() += d_out * gr.value(weight).AsMatrix(o, d);
  });
}

namespace {

struct GruTrace {
  Matrix reset, update, candidate, hidden_candidate_pre, prev;  // all [T,H]
};

}  // namespace

Var Gru(Graph& g, Var x, Var input_weight, Var hidden_weight, Var input_bias,
        Var hidden_bias, bool reverse) {
  const Tensor& in = g.value(x);
  ExpectRank(in, 2, "Gru input");
  const int steps = in.dim(0), d = in.dim(1);
  const Tensor& wh = g.value(hidden_weight);
  ExpectRank(wh, 2, "Gru hidden weight");
  const int hs = wh.dim(1);
  ExpectShape(wh, {3 * hs, hs}, "Gru hidden weight");
  ExpectShape(g.value(input_weight), {3 * hs, d}, "Gru input weight");
  ExpectShape(g.value(input_bias), {3 * hs}, "Gru input bias");
  ExpectShape(g.value(hidden_bias), {3 * hs}, "Gru hidden bias");

  Matrix gx = in.AsMatrix(steps, d) * g.value(input_weight).AsMatrix(3 * hs, d).transpose();
  gx.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(g.value(input_bias).data(), 3 * hs);
  auto whm = wh.AsMatrix(3 * hs, hs);
  Eigen::Map<const Eigen::VectorXd> bh(g.value(hidden_bias).data(), 3 * hs);

  auto tr = std::make_shared<GruTrace>();
  tr->reset.resize(steps, hs);
  tr->update.resize(steps, hs);
  tr->candidate.resize(steps, hs);
  tr->hidden_candidate_pre.resize(steps, hs);
  tr->prev.resize(steps, hs);
  Tensor out({steps, hs});
  Eigen::VectorXd h = Eigen::VectorXd::Zero(hs);
  Eigen::VectorXd gh(3 * hs);
  for (int step = 0; step < steps; ++step) {
    const int t = reverse ? steps - 1 - step : step;
    gh.noalias() = whm * h;
    gh += bh;
    tr->prev.row(t) = h.transpose();
    for (int j = 0; j < hs; ++j) {
      double r = Sigmoid(gx(t, j) + gh(j));
      double z = Sigmoid(gx(t, hs + j) + gh(hs + j));
      double n = std::tanh(gx(t, 2 * hs + j) + r * gh(2 * hs + j));
      tr->reset(t, j) = r;
      tr->update(t, j) = z;
      tr->candidate(t, j) = n;
      tr->hidden_candidate_pre(t, j) = gh(2 * hs + j);
      h(j) = (1.0 - z) * n + z * h(j);
      out.at(t, j) = h(j);
    }
  }

  return g.Apply(
      std::move(out), {x, input_weight, hidden_weight, input_bias, hidden_bias},
      [=](Graph& gr, int self) {
        const Tensor& d_out = gr.grad(Var{self});
        auto whm = gr.value(hidden_weight).AsMatrix(3 * hs, hs);
        Matrix d_gx = Matrix::Zero(steps, 3 * hs);
        Matrix d_wh = Matrix::Zero(3 * hs, hs);
        Eigen::VectorXd d_bh = Eigen::VectorXd::Zero(3 * hs);
        Eigen::VectorXd dh = Eigen::VectorXd::Zero(hs);
        Eigen::VectorXd d_gh(3 * hs);
        for (int step = steps - 1; step >= 0; --step) {
          const int t = reverse ? steps - 1 - step : step;
          for (int j = 0; j < hs; ++j) {
            dh(j) += d_out.at(t, j);
            const double r = tr->reset(t, j), z = tr->update(t, j), n = tr->candidate(t, j);
            const double hp = tr->prev(t, j);
            const double dn = dh(j) * (1.0 - z);
            const double dz = dh(j) * (hp - n);
            const double dan = dn * (1.0 - n * n);
            const double dr = dan * tr->hidden_candidate_pre(t, j);
            const double dar = dr * r * (1.0 - r);
            const double daz = dz * z * (1.0 - z);
            d_gx(t, j) = dar;
            d_gx(t, hs + j) = daz;
            d_gx(t, 2 * hs + j) = dan;
            d_gh(j) = dar;
            d_gh(hs + j) = daz;
            d_gh(2 * hs + j) = dan * r;
            dh(j) *= z;
          }
          d_wh.noalias() += d_gh * tr->prev.row(t);
          d_bh += d_gh;
          dh.noalias() += whm.transpose() * d_gh;
        }
        if (gr.needs_grad(hidden_weight))
          gr.MutableGrad(hidden_weight).AsMatrix(3 * hs, hs) += d_wh;
        if (gr.needs_grad(hidden_bias))
          Eigen::Map<Eigen::VectorXd>(gr.MutableGrad(hidden_bias).data(), 3 * hs) += d_bh;
        if (gr.needs_grad(input_weight))
          gr.MutableGrad(input_weight).AsMatrix(3 * hs, d).noalias() +=
              d_gx.transpose() * gr.value(x).AsMatrix(steps, d);
        if (gr.needs_grad(input_bias))
          AddColumnSums(d_gx, gr.MutableGrad(input_bias).data());
        if (gr.needs_grad(x))
          gr.MutableGrad(x).AsMatrix(steps, d).noalias() +=
              d_gx * gr.value(input_weight).AsMatrix(3 * hs, d);
      });
}

Var ConcatColumns(Graph& g, Var a, Var b) {
  const Tensor& ta = g.value(a);
  const Tensor& tb = g.value(b);
  ExpectRank(ta, 2, "ConcatColumns lhs");
  ExpectRank(tb, 2, "ConcatColumns rhs");
  if (ta.dim(0) != tb.dim(0)) throw BadShape("ConcatColumns: row counts differ");
  const int t = ta.dim(0), ca = ta.dim(1), cb = tb.dim(1);
  Tensor out({t, ca + cb});
  auto om = out.AsMatrix(t, ca + cb);
  om.leftCols(ca) = ta.AsMatrix(t, ca);
  om.rightCols(cb) = tb.AsMatrix(t, cb);
  return g.Apply(std::move(out), {a, b}, [=](Graph& gr, int self) {
    auto d_out = gr.grad(Var{self}).AsMatrix(t, ca + cb);
    if (gr.needs_grad(a)) gr.MutableGrad(a).AsMatrix(t, ca) += d_out.leftCols(ca);
    if (gr.needs_grad(b)) gr.MutableGrad(b).AsMatrix(t, cb) += d_out.rightCols(cb);
  });
}

Var LogSoftmax(Graph& g, Var x) {
  const Tensor& in = g.value(x);
  ExpectRank(in, 2, "LogSoftmax input");
  const int t = in.dim(0), c = in.dim(1);
  Tensor out = Tensor::FromMatrix(LogSoftmaxRows(in.ToMatrix()));
  return g.Apply(std::move(out), {x}, [=](Graph& gr, int self) {
    auto y = gr.value(Var{self}).AsMatrix(t, c);
    auto d_out = gr.grad(Var{self}).AsMatrix(t, c);
    auto dx = gr.MutableGrad(x).AsMatrix(t, c);
    for (int i = 0; i < t; ++i) {
      double s = SequentialRowSum(d_out, i);
      for (int k = 0; k < c; ++k) dx(i, k) += d_out(i, k) - std::exp(y(i, k)) * s;
    }
  });
}

}  // namespace nnet
}  // namespace scriptorium
