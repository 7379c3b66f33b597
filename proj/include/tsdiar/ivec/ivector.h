// tsdiar/ivec/ivector.h

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

#ifndef TSDIAR_IVEC_IVECTOR_H_
#define TSDIAR_IVEC_IVECTOR_H_

#include <Eigen/Core>
#include <string>
#include <vector>

#include "tsdiar/core/prob_stream.h"
#include "tsdiar/ivec/gmm.h"

namespace tsdiar {

// Zeroth- and centered first-order sufficient statistics. Additive: stats of
// concatenated audio are sums of per-piece stats, in any order.
struct BaumWelchStats {
  Eigen::VectorXd zeroth;  // C
  Eigen::MatrixXd first;   // C x F, centered on the UBM means

  BaumWelchStats() = default;
  BaumWelchStats(int c, int f)
      : zeroth(Eigen::VectorXd::Zero(c)), first(Eigen::MatrixXd::Zero(c, f)) {}

  BaumWelchStats &operator+=(const BaumWelchStats &o) {
    zeroth += o.zeroth;
    first += o.first;
    return *this;
  }
};

// Total-variability subspace, stored as C stacked F x D blocks.
struct TMatrix {
  Eigen::MatrixXd t;  // (C*F) x D
  int feat_dim = 0;

  int NumComponents() const {
    return feat_dim ? static_cast<int>(t.rows()) / feat_dim : 0;
  }
  int IvectorDim() const { return static_cast<int>(t.cols()); }
  Eigen::Block<const Eigen::MatrixXd> Component(int c) const {
    return t.block(c * feat_dim, 0, feat_dim, t.cols());
  }
};

// Soft-weighted accumulation: N_c = sum_t w_t gamma_tc,
// F_c = sum_t w_t gamma_tc (x_t - mu_c). All-one weights reduce to the
// ordinary hard accumulation.
BaumWelchStats AccumulateStats(const Eigen::MatrixXd &feats, const GmmUbm &ubm,
                               const Eigen::VectorXd &frame_weights);

BaumWelchStats AccumulateStats(const Eigen::MatrixXd &feats,
                               const GmmUbm &ubm);

// EM for the total-variability matrix with a minimum-divergence step per
// iteration. `evidence_trace` gets the T-dependent part of the marginal
// log-likelihood per iteration (non-decreasing).
TMatrix TrainTMatrix(const std::vector<BaumWelchStats> &stats,
                     const GmmUbm &ubm, int ivector_dim, int num_iters,
                     std::uint64_t seed,
                     std::vector<double> *evidence_trace = nullptr);

// Posterior mean under the standard-normal prior:
// w = L^-1 sum_c T_c' Sigma_c^-1 F_c, L = I + sum_c N_c T_c' Sigma_c^-1 T_c.
Eigen::VectorXd ExtractIvector(const BaumWelchStats &stats, const GmmUbm &ubm,
                               const TMatrix &tmat,
                               Eigen::MatrixXd *posterior_precision = nullptr);

// The 0.8 dominance rule: weight_t = p_{t,s} if p_{t,s} exceeds 0.8 of the
// frame's total speech probability, else 0.
Eigen::VectorXd SelectSpeakerFrames(const ProbStream &probs, int speaker_index);

void SaveTMatrix(const std::string &path, const TMatrix &tmat);
TMatrix LoadTMatrix(const std::string &path);

}  // namespace tsdiar

#endif  // TSDIAR_IVEC_IVECTOR_H_
