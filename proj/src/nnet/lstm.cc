// tsdiar/nnet/lstm.cc

// Copyright 2026  tsdiar contributors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tsdiar/nnet/lstm.h"

#include <cmath>

#include "tsdiar/util/common.h"

namespace tsdiar {

namespace {

inline double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void UniformInit(Param *p, int fan_in, Rng *rng) {
  double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (Eigen::Index i = 0; i < p->value.rows(); ++i)
    for (Eigen::Index j = 0; j < p->value.cols(); ++j)
      p->value(i, j) = rng->Uniform(-scale, scale);
}

void LstmProjected::Init(const std::string &prefix, int input_dim, int hidden,
                         int proj, Rng *rng) {
  input_dim_ = input_dim;
  hidden_ = hidden;
  proj_ = proj;
  w_gates_.Init(prefix + ".w_gates", 4 * hidden, input_dim + proj);
  b_gates_.Init(prefix + ".b_gates", 4 * hidden, 1);
  w_proj_.Init(prefix + ".w_proj", proj, hidden);
  UniformInit(&w_gates_, input_dim + proj, rng);
  UniformInit(&w_proj_, hidden, rng);
  // forget-gate bias starts open
  b_gates_.value.block(hidden, 0, hidden, 1).setConstant(1.0);
}

Eigen::MatrixXd LstmProjected::Forward(const Eigen::MatrixXd &x,
                                       Cache *cache) const {
  const Eigen::Index t_len = x.rows();
  const int h = hidden_, p = proj_;
  Require(x.cols() == input_dim_, "LstmProjected: input dim mismatch");

  // input contribution to all gates for the whole sequence at once
  Eigen::MatrixXd pre = x * w_gates_.value.leftCols(input_dim_).transpose();
  pre.rowwise() += b_gates_.value.col(0).transpose();
  const auto &w_rec = w_gates_.value.rightCols(proj_);

  Eigen::MatrixXd gate_i(t_len, h), gate_f(t_len, h), gate_g(t_len, h),
      gate_o(t_len, h), cell(t_len, h), tanh_cell(t_len, h), hid(t_len, h),
      out(t_len, p);
  Eigen::VectorXd r_prev = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd a(4 * h);

  for (Eigen::Index t = 0; t < t_len; ++t) {
    a = pre.row(t).transpose();
    a.noalias() += w_rec * r_prev;
    for (int j = 0; j < h; ++j) {
      double i_g = Sigmoid(a(j));
      double f_g = Sigmoid(a(h + j));
      double g_g = std::tanh(a(2 * h + j));
      double o_g = Sigmoid(a(3 * h + j));
      double c = f_g * c_prev(j) + i_g * g_g;
      double tc = std::tanh(c);
      gate_i(t, j) = i_g;
      gate_f(t, j) = f_g;
      gate_g(t, j) = g_g;
      gate_o(t, j) = o_g;
      cell(t, j) = c;
      tanh_cell(t, j) = tc;
      hid(t, j) = o_g * tc;
      c_prev(j) = c;
    }
    out.row(t).noalias() = (w_proj_.value * hid.row(t).transpose()).transpose();
    r_prev = out.row(t).transpose();
  }

  if (cache != nullptr) {
    cache->x = x;
    cache->gate_i = std::move(gate_i);
    cache->gate_f = std::move(gate_f);
    cache->gate_g = std::move(gate_g);
    cache->gate_o = std::move(gate_o);
    cache->cell = std::move(cell);
    cache->tanh_cell = std::move(tanh_cell);
    cache->hidden = std::move(hid);
    cache->out = out;
  }
  return out;
}

Eigen::MatrixXd LstmProjected::Backward(const Cache &cache,
                                        const Eigen::MatrixXd &grad_out) {
  const Eigen::Index t_len = cache.x.rows();
  const int h = hidden_, p = proj_;
  const auto &w_in = w_gates_.value.leftCols(input_dim_);
  const auto &w_rec = w_gates_.value.rightCols(proj_);

  Eigen::MatrixXd grad_x = Eigen::MatrixXd::Zero(t_len, input_dim_);
  Eigen::VectorXd dr_rec = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd da(4 * h), dm(h), dr(p);

  for (Eigen::Index t = t_len - 1; t >= 0; --t) {
    dr = grad_out.row(t).transpose() + dr_rec;
    // r = W_p m
    w_proj_.grad.noalias() += dr * cache.hidden.row(t);
    dm.noalias() = w_proj_.value.transpose() * dr;

    for (int j = 0; j < h; ++j) {
      double i_g = cache.gate_i(t, j), f_g = cache.gate_f(t, j);
      double g_g = cache.gate_g(t, j), o_g = cache.gate_o(t, j);
      double tc = cache.tanh_cell(t, j);
      double c_prev = t > 0 ? cache.cell(t - 1, j) : 0.0;

      double d_o = dm(j) * tc;
      double d_c = dm(j) * o_g * (1.0 - tc * tc) + dc_next(j);
      double d_i = d_c * g_g;
      double d_g = d_c * i_g;
      double d_f = d_c * c_prev;

      da(j) = d_i * i_g * (1.0 - i_g);
      da(h + j) = d_f * f_g * (1.0 - f_g);
      da(2 * h + j) = d_g * (1.0 - g_g * g_g);
      da(3 * h + j) = d_o * o_g * (1.0 - o_g);
      dc_next(j) = d_c * f_g;
    }

    b_gates_.grad.col(0) += da;
    w_gates_.grad.leftCols(input_dim_).noalias() += da * cache.x.row(t);
    if (t > 0)
      w_gates_.grad.rightCols(proj_).noalias() += da * cache.out.row(t - 1);
    grad_x.row(t).noalias() = (w_in.transpose() * da).transpose();
    dr_rec.noalias() = w_rec.transpose() * da;
  }
  return grad_x;
}

void BlstmProjected::Init(const std::string &prefix, int input_dim, int hidden,
                          int proj, Rng *rng) {
  proj_ = proj;
  fwd_.Init(prefix + ".fwd", input_dim, hidden, proj, rng);
  bwd_.Init(prefix + ".bwd", input_dim, hidden, proj, rng);
}

Eigen::MatrixXd BlstmProjected::Forward(const Eigen::MatrixXd &x,
                                        Cache *cache) const {
  Eigen::MatrixXd out(x.rows(), 2 * proj_);
  out.leftCols(proj_) = fwd_.Forward(x, cache ? &cache->fwd : nullptr);
  Eigen::MatrixXd rev =
      bwd_.Forward(x.colwise().reverse(), cache ? &cache->bwd : nullptr);
  out.rightCols(proj_) = rev.colwise().reverse();
  return out;
}

Eigen::MatrixXd BlstmProjected::Backward(const Cache &cache,
                                         const Eigen::MatrixXd &grad_out) {
  Eigen::MatrixXd grad_x = fwd_.Backward(cache.fwd, grad_out.leftCols(proj_));
  Eigen::MatrixXd rev_grad = bwd_.Backward(
      cache.bwd, grad_out.rightCols(proj_).colwise().reverse());
  grad_x += rev_grad.colwise().reverse();
  return grad_x;
}

ParamRefs BlstmProjected::Params() {
  ParamRefs out = fwd_.Params();
  for (Param *p : bwd_.Params()) out.push_back(p);
  return out;
}

void Linear::Init(const std::string &prefix, int input_dim, int output_dim,
                  Rng *rng) {
  w_.Init(prefix + ".w", output_dim, input_dim);
  b_.Init(prefix + ".b", output_dim, 1);
  UniformInit(&w_, input_dim, rng);
}

Eigen::MatrixXd Linear::Forward(const Eigen::MatrixXd &x) const {
  Eigen::MatrixXd out = x * w_.value.transpose();
  out.rowwise() += b_.value.col(0).transpose();
  return out;
}

Eigen::MatrixXd Linear::Backward(const Eigen::MatrixXd &x,
                                 const Eigen::MatrixXd &grad_out) {
  w_.grad.noalias() += grad_out.transpose() * x;
  b_.grad.col(0) += grad_out.colwise().sum().transpose();
  return grad_out * w_.value;
}

void Conv1d::Init(const std::string &prefix, int input_dim, int output_dim,
                  Rng *rng) {
  w_.Init(prefix + ".w", output_dim, 3 * input_dim);
  b_.Init(prefix + ".b", output_dim, 1);
  UniformInit(&w_, 3 * input_dim, rng);
}

Eigen::MatrixXd Conv1d::Forward(const Eigen::MatrixXd &x) const {
  const Eigen::Index t_len = x.rows(), in = x.cols();
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(t_len + 2, in);
  padded.middleRows(1, t_len) = x;
  Eigen::MatrixXd stacked(t_len, 3 * in);
  for (int k = 0; k < 3; ++k)
    stacked.middleCols(k * in, in) = padded.middleRows(k, t_len);
  Eigen::MatrixXd out = stacked * w_.value.transpose();
  out.rowwise() += b_.value.col(0).transpose();
  return out;
}

Eigen::MatrixXd Conv1d::Backward(const Eigen::MatrixXd &x,
                                 const Eigen::MatrixXd &grad_out) {
  const Eigen::Index t_len = x.rows(), in = x.cols();
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(t_len + 2, in);
  padded.middleRows(1, t_len) = x;
  Eigen::MatrixXd stacked(t_len, 3 * in);
  for (int k = 0; k < 3; ++k)
    stacked.middleCols(k * in, in) = padded.middleRows(k, t_len);

  w_.grad.noalias() += grad_out.transpose() * stacked;
  b_.grad.col(0) += grad_out.colwise().sum().transpose();

  Eigen::MatrixXd grad_stacked = grad_out * w_.value;  // T x 3In
  Eigen::MatrixXd grad_padded = Eigen::MatrixXd::Zero(t_len + 2, in);
  for (int k = 0; k < 3; ++k)
    grad_padded.middleRows(k, t_len) += grad_stacked.middleCols(k * in, in);
  return grad_padded.middleRows(1, t_len);
}

}  // namespace tsdiar
