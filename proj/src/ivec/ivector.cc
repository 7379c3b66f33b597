// tsdiar/ivec/ivector.cc

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

#include "tsdiar/ivec/ivector.h"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <iostream>

#include "tsdiar/util/common.h"
#include "tsdiar/util/container.h"
#include "tsdiar/util/rng.h"

namespace tsdiar {

BaumWelchStats AccumulateStats(const Eigen::MatrixXd &feats, const GmmUbm &ubm,
                               const Eigen::VectorXd &frame_weights) {
  Require(frame_weights.size() == feats.rows(),
          "AccumulateStats: weight/frame count mismatch");
  const int c = ubm.NumComponents(), f = ubm.Dim();
  BaumWelchStats stats(c, f);
  if (feats.rows() == 0) return stats;

  Eigen::MatrixXd post = ubm.Posteriors(feats);          // T x C
  post.array().colwise() *= frame_weights.array();       // w_t gamma_tc
  stats.zeroth = post.colwise().sum();
  stats.first = post.transpose() * feats;                 // C x F
  stats.first -= stats.zeroth.asDiagonal() * ubm.means;   // center on means
  return stats;
}

BaumWelchStats AccumulateStats(const Eigen::MatrixXd &feats,
                               const GmmUbm &ubm) {
  return AccumulateStats(feats, ubm,
                         Eigen::VectorXd::Ones(feats.rows()));
}

namespace {

// Per-component T_c' Sigma_c^-1 and Gram matrices reused across utterances.
struct TmatWorkspace {
  std::vector<Eigen::MatrixXd> t_inv_sigma;  // C of D x F
  std::vector<Eigen::MatrixXd> gram;         // C of D x D
};

TmatWorkspace BuildWorkspace(const TMatrix &tmat, const GmmUbm &ubm) {
  TmatWorkspace ws;
  const int c = ubm.NumComponents();
  for (int i = 0; i < c; ++i) {
    Eigen::MatrixXd tis = tmat.Component(i).transpose() *
                          ubm.vars.row(i).cwiseInverse().asDiagonal();
    ws.gram.push_back(tis * tmat.Component(i));
    ws.t_inv_sigma.push_back(std::move(tis));
  }
  return ws;
}

struct IvectorPosterior {
  Eigen::VectorXd mean;        // D
  Eigen::MatrixXd covariance;  // D x D
  double evidence = 0.0;       // 0.5 (mean' L mean - log|L|)
};

IvectorPosterior ComputePosterior(const BaumWelchStats &stats,
                                  const TmatWorkspace &ws, int dim) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
  for (std::size_t c = 0; c < ws.gram.size(); ++c) {
    l.noalias() += stats.zeroth(static_cast<int>(c)) * ws.gram[c];
    b.noalias() += ws.t_inv_sigma[c] * stats.first.row(static_cast<int>(c)).transpose();
  }
  Eigen::LLT<Eigen::MatrixXd> llt(l);
  IvectorPosterior post;
  post.mean = llt.solve(b);
  post.covariance = llt.solve(Eigen::MatrixXd::Identity(dim, dim));
  double logdet = 0.0;
  for (int i = 0; i < dim; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
  post.evidence = 0.5 * (post.mean.dot(b) - logdet);
  return post;
}

}  // namespace

TMatrix TrainTMatrix(const std::vector<BaumWelchStats> &stats,
                     const GmmUbm &ubm, int ivector_dim, int num_iters,
                     std::uint64_t seed,
                     std::vector<double> *evidence_trace) {
  const int c = ubm.NumComponents(), f = ubm.Dim(), d = ivector_dim;
  Require(d <= c * f, "TrainTMatrix: ivector dim exceeds supervector dim");
  Require(static_cast<int>(stats.size()) >= d,
          "TrainTMatrix: need at least as many utterances as dimensions");

  Rng rng(seed);
  TMatrix tmat;
  tmat.feat_dim = f;
  tmat.t.resize(c * f, d);
  for (Eigen::Index i = 0; i < tmat.t.rows(); ++i)
    for (Eigen::Index j = 0; j < d; ++j) tmat.t(i, j) = 0.1 * rng.Normal();

  for (int iter = 0; iter < num_iters; ++iter) {
    TmatWorkspace ws = BuildWorkspace(tmat, ubm);
    std::vector<Eigen::MatrixXd> a(c, Eigen::MatrixXd::Zero(d, d));
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(c * f, d);
    Eigen::MatrixXd second_moment = Eigen::MatrixXd::Zero(d, d);
    double evidence = 0.0;

    for (const auto &s : stats) {
      IvectorPosterior post = ComputePosterior(s, ws, d);
      Eigen::MatrixXd ww =
          post.covariance + post.mean * post.mean.transpose();
      evidence += post.evidence;
      second_moment += ww;
      for (int i = 0; i < c; ++i) {
        a[i].noalias() += s.zeroth(i) * ww;
        b.block(i * f, 0, f, d).noalias() +=
            s.first.row(i).transpose() * post.mean.transpose();
      }
    }
    if (evidence_trace != nullptr) evidence_trace->push_back(evidence);

    for (int i = 0; i < c; ++i) {
      Eigen::LLT<Eigen::MatrixXd> llt(a[i]);
      if (llt.info() != Eigen::Success) {
        std::cerr << "TrainTMatrix: singular precision for component " << i
                  << ", adding ridge 1e-6\n";
        a[i] += 1e-6 * Eigen::MatrixXd::Identity(d, d);
        llt.compute(a[i]);
      }
      // T_c = B_c A_c^-1, solved row-wise via the Cholesky factor
      tmat.t.block(i * f, 0, f, d) =
          llt.solve(b.block(i * f, 0, f, d).transpose()).transpose();
    }

    // Minimum-divergence step: whiten the latent prior and fold the
    // transform into T.
    second_moment /= static_cast<double>(stats.size());
    Eigen::LLT<Eigen::MatrixXd> llt(second_moment);
    if (llt.info() == Eigen::Success)
      tmat.t = tmat.t * llt.matrixL();
  }
  return tmat;
}

Eigen::VectorXd ExtractIvector(const BaumWelchStats &stats, const GmmUbm &ubm,
                               const TMatrix &tmat,
                               Eigen::MatrixXd *posterior_precision) {
  TmatWorkspace ws = BuildWorkspace(tmat, ubm);
  const int d = tmat.IvectorDim();
  IvectorPosterior post = ComputePosterior(stats, ws, d);
  if (posterior_precision != nullptr) {
    Eigen::MatrixXd l = Eigen::MatrixXd::Identity(d, d);
    for (std::size_t c = 0; c < ws.gram.size(); ++c)
      l += stats.zeroth(static_cast<int>(c)) * ws.gram[c];
    *posterior_precision = l;
  }
  return post.mean;
}

Eigen::VectorXd SelectSpeakerFrames(const ProbStream &probs,
                                    int speaker_index) {
  Require(speaker_index >= 0 && speaker_index < probs.NumSpeakers(),
          "SelectSpeakerFrames: speaker index out of range");
  const Eigen::Index t = probs.values.rows();
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(t);
  for (Eigen::Index i = 0; i < t; ++i) {
    double p = probs.values(i, speaker_index);
    double total = probs.values.row(i).sum();
    if (total > 0.0 && p > 0.8 * total) weights(i) = p;
  }
  return weights;
}

void SaveTMatrix(const std::string &path, const TMatrix &tmat) {
  ModelContainer mc;
  mc.kind = "tmatrix";
  mc.config = {{"feat_dim", tmat.feat_dim},
               {"components", tmat.NumComponents()},
               {"ivector_dim", tmat.IvectorDim()}};
  mc.Add("t", tmat.t);
  WriteModelContainer(path, mc);
}

TMatrix LoadTMatrix(const std::string &path) {
  ModelContainer mc = ReadModelContainer(path);
  Require(mc.kind == "tmatrix", "LoadTMatrix: wrong container kind in " + path);
  TMatrix tmat;
  tmat.t = mc.Tensor("t");
  tmat.feat_dim = mc.config.at("feat_dim").get<int>();
  return tmat;
}

}  // namespace tsdiar
