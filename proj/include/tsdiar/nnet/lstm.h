// tsdiar/nnet/lstm.h

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

#ifndef TSDIAR_NNET_LSTM_H_
#define TSDIAR_NNET_LSTM_H_

#include <Eigen/Core>
#include <string>
#include <vector>

#include "tsdiar/util/rng.h"

namespace tsdiar {

// Trainable tensor with its gradient accumulator.
struct Param {
  std::string name;
  Eigen::MatrixXd value;
  Eigen::MatrixXd grad;

  void Init(const std::string &n, int rows, int cols) {
    name = n;
    value = Eigen::MatrixXd::Zero(rows, cols);
    grad = Eigen::MatrixXd::Zero(rows, cols);
  }
  void ZeroGrad() { grad.setZero(); }
};

using ParamRefs = std::vector<Param *>;

// Uniform init scaled by fan-in, the usual recipe for tanh/sigmoid nets.
void UniformInit(Param *p, int fan_in, Rng *rng);

// Unidirectional LSTM with a linear projection of the hidden state
// (gate order i, f, g, o). The projection output r is both the layer
// output and the recurrent input.
class LstmProjected {
 public:
  void Init(const std::string &prefix, int input_dim, int hidden, int proj,
            Rng *rng);

  struct Cache {
    Eigen::MatrixXd x;                  // T x In
    Eigen::MatrixXd gate_i, gate_f, gate_g, gate_o;  // T x H, post-activation
    Eigen::MatrixXd cell, tanh_cell;    // T x H
    Eigen::MatrixXd hidden;             // T x H (o * tanh c)
    Eigen::MatrixXd out;                // T x P
  };

  // Scan order is always ascending rows; callers reverse rows for the
  // backward direction. `cache` may be null for inference.
  Eigen::MatrixXd Forward(const Eigen::MatrixXd &x, Cache *cache) const;

  // Accumulates parameter gradients, returns the input gradient.
  Eigen::MatrixXd Backward(const Cache &cache,
                           const Eigen::MatrixXd &grad_out);

  ParamRefs Params() { return {&w_gates_, &b_gates_, &w_proj_}; }
  int InputDim() const { return input_dim_; }
  int OutputDim() const { return proj_; }

 private:
  int input_dim_ = 0, hidden_ = 0, proj_ = 0;
  Param w_gates_;  // 4H x (In + P)
  Param b_gates_;  // 4H x 1
  Param w_proj_;   // P x H
};

// Bidirectional LSTMP: forward and time-reversed cells, outputs concatenated
// to T x 2P.
class BlstmProjected {
 public:
  void Init(const std::string &prefix, int input_dim, int hidden, int proj,
            Rng *rng);

  struct Cache {
    LstmProjected::Cache fwd, bwd;
  };

  Eigen::MatrixXd Forward(const Eigen::MatrixXd &x, Cache *cache) const;
  Eigen::MatrixXd Backward(const Cache &cache,
                           const Eigen::MatrixXd &grad_out);

  ParamRefs Params();
  int OutputDim() const { return 2 * proj_; }

 private:
  int proj_ = 0;
  LstmProjected fwd_, bwd_;
};

class Linear {
 public:
  void Init(const std::string &prefix, int input_dim, int output_dim,
            Rng *rng);

  Eigen::MatrixXd Forward(const Eigen::MatrixXd &x) const;
  // needs the forward input
  Eigen::MatrixXd Backward(const Eigen::MatrixXd &x,
                           const Eigen::MatrixXd &grad_out);

  ParamRefs Params() { return {&w_, &b_}; }

 private:
  Param w_;  // Out x In
  Param b_;  // Out x 1
};

// Temporal convolution, kernel width 3, zero padding, stride 1.
class Conv1d {
 public:
  void Init(const std::string &prefix, int input_dim, int output_dim,
            Rng *rng);

  Eigen::MatrixXd Forward(const Eigen::MatrixXd &x) const;
  Eigen::MatrixXd Backward(const Eigen::MatrixXd &x,
                           const Eigen::MatrixXd &grad_out);

  ParamRefs Params() { return {&w_, &b_}; }

 private:
  Param w_;  // Out x (3 * In), taps ordered t-1, t, t+1
  Param b_;  // Out x 1
};

}  // namespace tsdiar

#endif  // TSDIAR_NNET_LSTM_H_
