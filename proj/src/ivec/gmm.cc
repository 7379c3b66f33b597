// tsdiar/ivec/gmm.cc

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

#include "tsdiar/ivec/gmm.h"

#include <cmath>
#include <iostream>
#include <limits>

#include "tsdiar/util/common.h"
#include "tsdiar/util/container.h"
#include "tsdiar/util/rng.h"

namespace tsdiar {

namespace {

// T x C matrix of per-component log-densities.
Eigen::MatrixXd LogDensities(const Eigen::MatrixXd &feats, const GmmUbm &ubm) {
  const int c = ubm.NumComponents();
  Eigen::MatrixXd inv_var = ubm.vars.cwiseInverse();          // C x F
  Eigen::VectorXd comp_const(c);
  for (int i = 0; i < c; ++i)
    comp_const(i) = std::log(ubm.weights(i)) -
                    0.5 * (ubm.vars.row(i).array().log().sum() +
                           ubm.Dim() * std::log(2.0 * M_PI)) -
                    0.5 * (ubm.means.row(i).array().square() *
                           inv_var.row(i).array())
                              .sum();
  // -0.5 x^2/var + x*mean/var + const
  Eigen::MatrixXd ll = -0.5 * (feats.array().square().matrix() *
                               inv_var.transpose());
  ll.noalias() += feats * (ubm.means.array() * inv_var.array())
                              .matrix()
                              .transpose();
  ll.rowwise() += comp_const.transpose();
  return ll;
}

// k-means++ seeding followed by a few Lloyd iterations; returns centers.
Eigen::MatrixXd KmeansInit(const Eigen::MatrixXd &frames, int k, Rng *rng) {
  const Eigen::Index n = frames.rows();
  Eigen::MatrixXd centers(k, frames.cols());
  centers.row(0) = frames.row(rng->UniformInt(static_cast<int>(n)));
  Eigen::VectorXd dist2 =
      (frames.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int i = 1; i < k; ++i) {
    double total = dist2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double u = rng->Uniform() * total, acc = 0.0;
      for (pick = 0; pick < n - 1; ++pick) {
        acc += dist2(pick);
        if (acc >= u) break;
      }
    } else {
      pick = rng->UniformInt(static_cast<int>(n));
    }
    centers.row(i) = frames.row(pick);
    dist2 = dist2.cwiseMin(
        (frames.rowwise() - centers.row(i)).rowwise().squaredNorm());
  }
  std::vector<int> assign(n);
  for (int iter = 0; iter < 5; ++iter) {
    for (Eigen::Index t = 0; t < n; ++t) {
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < k; ++i) {
        double d = (frames.row(t) - centers.row(i)).squaredNorm();
        if (d < best) {
          best = d;
          assign[t] = i;
        }
      }
    }
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, frames.cols());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (Eigen::Index t = 0; t < n; ++t) {
      sums.row(assign[t]) += frames.row(t);
      counts(assign[t]) += 1.0;
    }
    for (int i = 0; i < k; ++i)
      if (counts(i) > 0) centers.row(i) = sums.row(i) / counts(i);
  }
  return centers;
}

}  // namespace

Eigen::MatrixXd GmmUbm::Posteriors(const Eigen::MatrixXd &feats,
                                   Eigen::VectorXd *frame_loglike) const {
  Eigen::MatrixXd ll = LogDensities(feats, *this);
  Eigen::VectorXd row_max = ll.rowwise().maxCoeff();
  Eigen::MatrixXd post =
      (ll.colwise() - row_max).array().exp();
  Eigen::VectorXd norm = post.rowwise().sum();
  post.array().colwise() /= norm.array();
  if (frame_loglike != nullptr)
    *frame_loglike = row_max.array() + norm.array().log();
  return post;
}

double GmmUbm::TotalLogLikelihood(const Eigen::MatrixXd &feats) const {
  Eigen::VectorXd frame_ll;
  Posteriors(feats, &frame_ll);
  return frame_ll.sum();
}

GmmUbm TrainUbm(const Eigen::MatrixXd &frames, int num_components,
                int num_iters, std::uint64_t seed,
                std::vector<double> *ll_trace) {
  const Eigen::Index n = frames.rows();
  const int f = static_cast<int>(frames.cols());
  Require(n >= static_cast<Eigen::Index>(num_components) * 10,
          "TrainUbm: need at least 10 frames per component");
  Rng rng(seed);

  GmmUbm ubm;
  ubm.weights = Eigen::VectorXd::Constant(num_components, 1.0 / num_components);
  ubm.means = KmeansInit(frames, num_components, &rng);
  Eigen::RowVectorXd global_mean = frames.colwise().mean();
  Eigen::RowVectorXd global_var =
      ((frames.rowwise() - global_mean).array().square().colwise().sum() /
       static_cast<double>(n))
          .max(kVarianceFloor);
  ubm.vars = global_var.replicate(num_components, 1);

  for (int iter = 0; iter < num_iters; ++iter) {
    Eigen::VectorXd frame_ll;
    Eigen::MatrixXd post = ubm.Posteriors(frames, &frame_ll);
    if (ll_trace != nullptr) ll_trace->push_back(frame_ll.sum());

    Eigen::VectorXd occ = post.colwise().sum();              // C
    Eigen::MatrixXd first = post.transpose() * frames;       // C x F
    Eigen::MatrixXd second =
        post.transpose() * frames.array().square().matrix();  // C x F

    for (int c = 0; c < num_components; ++c) {
      if (occ(c) < 1e-8 * static_cast<double>(n)) {
        // re-seed a dying component by splitting the heaviest one
        int heaviest = 0;
        occ.maxCoeff(&heaviest);
        std::cerr << "TrainUbm: component " << c
                  << " emptied, re-seeding from component " << heaviest
                  << " at iteration " << iter << "\n";
        Eigen::RowVectorXd jitter(f);
        for (int d = 0; d < f; ++d)
          jitter(d) = 0.1 * std::sqrt(ubm.vars(heaviest, d)) * rng.Normal();
        ubm.means.row(c) = ubm.means.row(heaviest) + jitter;
        ubm.vars.row(c) = ubm.vars.row(heaviest);
        ubm.weights(c) = ubm.weights(heaviest) / 2.0;
        ubm.weights(heaviest) /= 2.0;
        continue;
      }
      ubm.means.row(c) = first.row(c) / occ(c);
      ubm.vars.row(c) = (second.row(c) / occ(c) -
                         ubm.means.row(c).array().square().matrix())
                            .array()
                            .max(kVarianceFloor);
      ubm.weights(c) = occ(c) / static_cast<double>(n);
    }
    ubm.weights /= ubm.weights.sum();
  }
  return ubm;
}

void SaveUbm(const std::string &path, const GmmUbm &ubm) {
  ModelContainer mc;
  mc.kind = "gmm-ubm";
  mc.config = {{"components", ubm.NumComponents()}, {"dim", ubm.Dim()},
               {"variance_floor", kVarianceFloor}};
  mc.Add("weights", ubm.weights);
  mc.Add("means", ubm.means);
  mc.Add("vars", ubm.vars);
  WriteModelContainer(path, mc);
}

GmmUbm LoadUbm(const std::string &path) {
  ModelContainer mc = ReadModelContainer(path);
  Require(mc.kind == "gmm-ubm", "LoadUbm: wrong container kind in " + path);
  GmmUbm ubm;
  ubm.weights = mc.Tensor("weights");
  ubm.means = mc.Tensor("means");
  ubm.vars = mc.Tensor("vars");
  return ubm;
}

}  // namespace tsdiar
