// tsdiar/ivec/gmm.h

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

#ifndef TSDIAR_IVEC_GMM_H_
#define TSDIAR_IVEC_GMM_H_

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace tsdiar {

inline constexpr double kVarianceFloor = 1e-4;

// Diagonal-covariance GMM universal background model.
struct GmmUbm {
  Eigen::VectorXd weights;  // C, simplex
  Eigen::MatrixXd means;    // C x F
  Eigen::MatrixXd vars;     // C x F, floored at kVarianceFloor

  int NumComponents() const { return static_cast<int>(weights.size()); }
  int Dim() const { return static_cast<int>(means.cols()); }

  // T x C responsibilities; rows sum to 1. Optionally returns the per-frame
  // total log-likelihood.
  Eigen::MatrixXd Posteriors(const Eigen::MatrixXd &feats,
                             Eigen::VectorXd *frame_loglike = nullptr) const;

  double TotalLogLikelihood(const Eigen::MatrixXd &feats) const;
};

// EM from k-means++ initialization. The per-iteration total log-likelihood
// (evaluated at the entering parameters) is appended to `ll_trace`; it is
// non-decreasing up to the variance-floor perturbation. Emptied components
// are re-seeded by splitting the heaviest one.
GmmUbm TrainUbm(const Eigen::MatrixXd &frames, int num_components,
                int num_iters, std::uint64_t seed,
                std::vector<double> *ll_trace = nullptr);

void SaveUbm(const std::string &path, const GmmUbm &ubm);
GmmUbm LoadUbm(const std::string &path);

}  // namespace tsdiar

#endif  // TSDIAR_IVEC_GMM_H_
