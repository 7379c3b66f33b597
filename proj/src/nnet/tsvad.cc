// tsdiar/nnet/tsvad.cc

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

#include "tsdiar/nnet/tsvad.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tsdiar/util/common.h"
#include "tsdiar/util/container.h"

namespace tsdiar {

Eigen::MatrixXd BuildTargets(const Segmentation &ref,
                             const std::vector<std::string> &speakers,
                             const FrameClock &clock, int num_frames) {
  Require(speakers.size() <= 4, "BuildTargets: more than 4 speakers");
  Eigen::MatrixXi mask = SegmentationToFrames(ref, clock, speakers);
  Eigen::MatrixXd targets(num_frames, 8);
  for (int t = 0; t < num_frames; ++t)
    for (int s = 0; s < 4; ++s) {
      bool active = s < mask.cols() && t < mask.rows() && mask(t, s) != 0;
      targets(t, 2 * s) = active ? 0.0 : 1.0;
      targets(t, 2 * s + 1) = active ? 1.0 : 0.0;
    }
  return targets;
}

TrainingExample PermuteSpeakers(const TrainingExample &example,
                                const std::vector<int> &pi) {
  Require(pi.size() == 4, "PermuteSpeakers: permutation must have 4 entries");
  std::vector<bool> seen(4, false);
  for (int v : pi) {
    Require(v >= 0 && v < 4 && !seen[v],
            "PermuteSpeakers: not a permutation of {0..3}");
    seen[v] = true;
  }
  TrainingExample out;
  out.feat = example.feat;
  out.ivectors.resize(4);
  out.targets.resizeLike(example.targets);
  for (int s = 0; s < 4; ++s) {
    out.ivectors[s] = example.ivectors[pi[s]];
    out.targets.col(2 * s) = example.targets.col(2 * pi[s]);
    out.targets.col(2 * s + 1) = example.targets.col(2 * pi[s] + 1);
  }
  return out;
}

double PairSoftmaxLoss(const Eigen::MatrixXd &logits,
                       const Eigen::MatrixXd &targets,
                       Eigen::MatrixXd *grad_logits) {
  const Eigen::Index t_len = logits.rows();
  const int num_pairs = static_cast<int>(logits.cols()) / 2;
  Require(logits.rows() == targets.rows() && logits.cols() == targets.cols(),
          "PairSoftmaxLoss: shape mismatch");
  if (grad_logits != nullptr) grad_logits->setZero(t_len, logits.cols());

  double loss = 0.0;
  for (Eigen::Index t = 0; t < t_len; ++t) {
    for (int s = 0; s < num_pairs; ++s) {
      double t0 = targets(t, 2 * s), t1 = targets(t, 2 * s + 1);
      Require(std::abs(t0 + t1 - 1.0) < 1e-9,
              "PairSoftmaxLoss: target pair must sum to 1");
      double z0 = logits(t, 2 * s), z1 = logits(t, 2 * s + 1);
      double m = std::max(z0, z1);
      double e0 = std::exp(z0 - m), e1 = std::exp(z1 - m);
      double norm = e0 + e1;
      double log_p0 = z0 - m - std::log(norm);
      double log_p1 = z1 - m - std::log(norm);
      loss += -(t0 * log_p0 + t1 * log_p1);
      if (grad_logits != nullptr) {
        (*grad_logits)(t, 2 * s) = e0 / norm - t0;
        (*grad_logits)(t, 2 * s + 1) = e1 / norm - t1;
      }
    }
  }
  double scale = t_len > 0 ? 1.0 / static_cast<double>(t_len) : 1.0;
  if (grad_logits != nullptr) *grad_logits *= scale;
  return loss * scale;
}

Eigen::MatrixXd MutualThreshold(const Eigen::MatrixXd &probs, double delta) {
  Require(delta >= 0.0, "MutualThreshold: delta must be non-negative");
  Eigen::MatrixXd out = probs;
  for (Eigen::Index t = 0; t < probs.rows(); ++t) {
    double row_max = probs.row(t).maxCoeff();
    for (Eigen::Index s = 0; s < probs.cols(); ++s)
      if (row_max - probs(t, s) > delta) out(t, s) = 0.0;
  }
  return out;
}

TsVadModel::TsVadModel(const TsVadConfig &cfg) : cfg_(cfg) {
  Require(cfg.num_speakers == 4, "TsVadModel: the task fixes 4 speakers");
  Rng rng(cfg.seed);
  sd1_.Init("sd1", cfg.feat_dim + cfg.ivector_dim, cfg.sd_hidden, cfg.sd_proj,
            &rng);
  sd2_.Init("sd2", 2 * cfg.sd_proj, cfg.sd_hidden, cfg.sd_proj, &rng);
  combine_.Init("combine", 4 * 2 * cfg.sd_proj, cfg.combine_hidden,
                cfg.combine_proj, &rng);
  heads_.resize(4);
  for (int s = 0; s < 4; ++s)
    heads_[s].Init("head" + std::to_string(s), 2 * cfg.combine_proj, 2, &rng);
}

namespace {

Eigen::MatrixXd ConcatIvector(const Eigen::MatrixXd &feat,
                              const Eigen::VectorXd &ivector) {
  Eigen::MatrixXd in(feat.rows(), feat.cols() + ivector.size());
  in.leftCols(feat.cols()) = feat;
  in.rightCols(ivector.size()).rowwise() = ivector.transpose();
  return in;
}

}  // namespace

Eigen::MatrixXd TsVadModel::SdForward(const Eigen::MatrixXd &feat,
                                      const Eigen::VectorXd &ivector) const {
  Require(feat.cols() == cfg_.feat_dim && ivector.size() == cfg_.ivector_dim,
          "SdForward: dimension mismatch");
  Eigen::MatrixXd in = ConcatIvector(feat, ivector);
  return sd2_.Forward(sd1_.Forward(in, nullptr), nullptr);
}

ProbStream TsVadModel::Forward(const Eigen::MatrixXd &feat,
                               const std::vector<Eigen::VectorXd> &ivectors,
                               const FrameClock &clock,
                               const std::vector<std::string> &speaker_ids) const {
  Require(ivectors.size() == 4, "TsVadModel::Forward: exactly 4 i-vectors");
  const Eigen::Index t_len = feat.rows();
  Eigen::MatrixXd concat(t_len, 4 * 2 * cfg_.sd_proj);
  for (int s = 0; s < 4; ++s)
    concat.middleCols(s * 2 * cfg_.sd_proj, 2 * cfg_.sd_proj) =
        SdForward(feat, ivectors[s]);
  Eigen::MatrixXd combined = combine_.Forward(concat, nullptr);

  Eigen::MatrixXd probs(t_len, 4);
  for (int s = 0; s < 4; ++s) {
    Eigen::MatrixXd logits = heads_[s].Forward(combined);
    for (Eigen::Index t = 0; t < t_len; ++t) {
      double m = std::max(logits(t, 0), logits(t, 1));
      double e0 = std::exp(logits(t, 0) - m), e1 = std::exp(logits(t, 1) - m);
      probs(t, s) = e1 / (e0 + e1);
    }
  }
  return ProbStream(probs, clock, speaker_ids);
}

Eigen::MatrixXd TsVadModel::ForwardTrain(const TrainingExample &example,
                                         ForwardCache *cache) const {
  Require(example.ivectors.size() == 4,
          "ForwardTrain: exactly 4 i-vectors required");
  const Eigen::Index t_len = example.feat.rows();
  const int width = 2 * cfg_.sd_proj;
  cache->combine_in.resize(t_len, 4 * width);
  for (int s = 0; s < 4; ++s) {
    cache->sd_in[s] = ConcatIvector(example.feat, example.ivectors[s]);
    cache->sd1_out[s] = sd1_.Forward(cache->sd_in[s], &cache->sd1[s]);
    cache->sd_out[s] = sd2_.Forward(cache->sd1_out[s], &cache->sd2[s]);
    cache->combine_in.middleCols(s * width, width) = cache->sd_out[s];
  }
  cache->combine_out = combine_.Forward(cache->combine_in, &cache->combine);

  Eigen::MatrixXd logits(t_len, 8);
  for (int s = 0; s < 4; ++s)
    logits.middleCols(2 * s, 2) = heads_[s].Forward(cache->combine_out);
  return logits;
}

void TsVadModel::Backward(const ForwardCache &cache,
                          const Eigen::MatrixXd &grad_logits) {
  const Eigen::Index t_len = cache.combine_out.rows();
  Eigen::MatrixXd grad_combined =
      Eigen::MatrixXd::Zero(t_len, cache.combine_out.cols());
  for (int s = 0; s < 4; ++s)
    grad_combined +=
        heads_[s].Backward(cache.combine_out, grad_logits.middleCols(2 * s, 2));

  Eigen::MatrixXd grad_concat = combine_.Backward(cache.combine, grad_combined);
  const int width = 2 * cfg_.sd_proj;
  for (int s = 0; s < 4; ++s) {
    Eigen::MatrixXd g2 =
        sd2_.Backward(cache.sd2[s], grad_concat.middleCols(s * width, width));
    sd1_.Backward(cache.sd1[s], g2);
  }
}

ParamRefs TsVadModel::Params() {
  ParamRefs out = sd1_.Params();
  for (Param *p : sd2_.Params()) out.push_back(p);
  for (Param *p : combine_.Params()) out.push_back(p);
  for (auto &head : heads_)
    for (Param *p : head.Params()) out.push_back(p);
  return out;
}

void TsVadModel::Save(const std::string &path) const {
  ModelContainer mc;
  mc.kind = "tsvad-1c";
  mc.config = {{"feat_dim", cfg_.feat_dim},
               {"ivector_dim", cfg_.ivector_dim},
               {"sd_hidden", cfg_.sd_hidden},
               {"sd_proj", cfg_.sd_proj},
               {"combine_hidden", cfg_.combine_hidden},
               {"combine_proj", cfg_.combine_proj},
               {"seed", cfg_.seed}};
  auto *self = const_cast<TsVadModel *>(this);
  for (Param *p : self->Params()) mc.Add(p->name, p->value);
  WriteModelContainer(path, mc);
}

TsVadModel TsVadModel::Load(const std::string &path) {
  ModelContainer mc = ReadModelContainer(path);
  Require(mc.kind == "tsvad-1c", "TsVadModel::Load: wrong container kind");
  TsVadConfig cfg;
  cfg.feat_dim = mc.config.at("feat_dim").get<int>();
  cfg.ivector_dim = mc.config.at("ivector_dim").get<int>();
  cfg.sd_hidden = mc.config.at("sd_hidden").get<int>();
  cfg.sd_proj = mc.config.at("sd_proj").get<int>();
  cfg.combine_hidden = mc.config.at("combine_hidden").get<int>();
  cfg.combine_proj = mc.config.at("combine_proj").get<int>();
  cfg.seed = mc.config.at("seed").get<std::uint64_t>();
  TsVadModel model(cfg);
  for (Param *p : model.Params()) p->value = mc.Tensor(p->name);
  return model;
}

SgdUpdater::SgdUpdater(const ParamRefs &params) {
  for (const Param *p : params)
    velocity_.push_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
}

void SgdUpdater::Step(const ParamRefs &params, double learning_rate,
                      double momentum) {
  Require(params.size() == velocity_.size(), "SgdUpdater: param set changed");
  for (std::size_t i = 0; i < params.size(); ++i) {
    velocity_[i] = momentum * velocity_[i] - learning_rate * params[i]->grad;
    params[i]->value += velocity_[i];
  }
}

std::vector<EpochLog> TrainMulti(TsVadModel *model,
                                 const std::vector<TrainingExample> &train,
                                 const std::vector<TrainingExample> &dev) {
  Require(!train.empty(), "TrainMulti: empty training set");
  const TsVadConfig &cfg = model->Config();
  Rng rng(cfg.seed ^ 0x7261696e6572ull);
  ParamRefs params = model->Params();
  SgdUpdater sgd(params);

  double lr = cfg.learning_rate;
  double best_dev = std::numeric_limits<double>::infinity();
  std::vector<EpochLog> log;

  auto dev_loss_fn = [&]() {
    if (dev.empty()) return 0.0;
    double total = 0.0;
    TsVadModel::ForwardCache cache;
    for (const auto &ex : dev) {
      Eigen::MatrixXd logits = model->ForwardTrain(ex, &cache);
      total += PairSoftmaxLoss(logits, ex.targets);
    }
    return total / static_cast<double>(dev.size());
  };

  std::vector<int> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  for (int epoch = 0; epoch < cfg.num_epochs; ++epoch) {
    rng.Shuffle(&order);
    double epoch_loss = 0.0;
    TsVadModel::ForwardCache cache;
    for (std::size_t start = 0; start < order.size();
         start += cfg.batch_chunks) {
      std::size_t batch_end = std::min(order.size(),
                                       start + cfg.batch_chunks);
      const double batch_scale = 1.0 / static_cast<double>(batch_end - start);
      for (Param *p : params) p->ZeroGrad();
      for (std::size_t i = start; i < batch_end; ++i) {
        TrainingExample ex =
            PermuteSpeakers(train[order[i]], rng.Permutation(4));
        Eigen::MatrixXd logits = model->ForwardTrain(ex, &cache);
        Eigen::MatrixXd grad;
        double loss = PairSoftmaxLoss(logits, ex.targets, &grad);
        RequireNumeric(std::isfinite(loss),
                       "TrainMulti: loss diverged at epoch " +
                           std::to_string(epoch));
        epoch_loss += loss;
        grad *= batch_scale;
        model->Backward(cache, grad);
      }
      sgd.Step(params, lr, cfg.momentum);
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = epoch_loss / static_cast<double>(train.size());
    entry.dev_loss = dev_loss_fn();
    entry.learning_rate = lr;
    log.push_back(entry);

    // halve the rate when the dev loss plateaus
    double target = best_dev - 1e-4 * std::abs(best_dev);
    if (!dev.empty() && entry.dev_loss > target) lr *= cfg.lr_decay;
    best_dev = std::min(best_dev, entry.dev_loss);
  }
  return log;
}

}  // namespace tsdiar
