// tsdiar/nnet/tsvad.h

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

#ifndef TSDIAR_NNET_TSVAD_H_
#define TSDIAR_NNET_TSVAD_H_

#include <string>
#include <vector>

#include "tsdiar/core/prob_stream.h"
#include "tsdiar/core/segmentation.h"
#include "tsdiar/nnet/lstm.h"

namespace tsdiar {

struct TsVadConfig {
  int feat_dim = 20;
  int ivector_dim = 32;
  int sd_hidden = 64;
  int sd_proj = 32;
  int combine_hidden = 64;
  int combine_proj = 32;
  int num_speakers = 4;
  // optimizer
  double learning_rate = 0.01;
  double momentum = 0.9;
  double lr_decay = 0.5;
  int chunk_frames = 400;
  int batch_chunks = 8;
  int num_epochs = 10;
  std::uint64_t seed = 0;
};

// One training chunk: features, the four conditioning i-vectors, and the
// 8-dim per-frame targets (four silence/speech pairs).
struct TrainingExample {
  Eigen::MatrixXd feat;                    // T x F
  std::vector<Eigen::VectorXd> ivectors;   // 4 of D
  Eigen::MatrixXd targets;                 // T x 8
};

// Per-frame targets from a reference segmentation: pair s is (0,1) when
// speaker s is active, (1,0) otherwise. Throws on more than 4 speakers.
Eigen::MatrixXd BuildTargets(const Segmentation &ref,
                             const std::vector<std::string> &speakers,
                             const FrameClock &clock, int num_frames);

// Applies a speaker permutation to i-vectors and target pairs, features
// untouched. pi must be a permutation of {0..3}; slot s of the result is
// slot pi[s] of the input.
TrainingExample PermuteSpeakers(const TrainingExample &example,
                                const std::vector<int> &pi);

// Sum over speakers of pair cross-entropies, averaged over frames. Writes
// d loss / d logits into grad_logits when non-null. Throws DataError when a
// target pair does not sum to 1.
double PairSoftmaxLoss(const Eigen::MatrixXd &logits,
                       const Eigen::MatrixXd &targets,
                       Eigen::MatrixXd *grad_logits = nullptr);

// Zeroes probabilities dominated by the per-frame maximum by more than
// delta; never increases any entry, preserves the per-frame argmax set.
Eigen::MatrixXd MutualThreshold(const Eigen::MatrixXd &probs, double delta);

// Multi-speaker TS-VAD: a shared two-layer BLSTMP speaker-detection block
// per slot, one combining BLSTMP over the concatenated SD outputs, and one
// two-class head per speaker.
class TsVadModel {
 public:
  explicit TsVadModel(const TsVadConfig &cfg);
  TsVadModel() = default;

  // SD block on (features, one i-vector); independent of the slot index.
  Eigen::MatrixXd SdForward(const Eigen::MatrixXd &feat,
                            const Eigen::VectorXd &ivector) const;

  // Full forward returning per-speaker speech probabilities.
  ProbStream Forward(const Eigen::MatrixXd &feat,
                     const std::vector<Eigen::VectorXd> &ivectors,
                     const FrameClock &clock,
                     const std::vector<std::string> &speaker_ids) const;

  // Forward keeping caches; returns T x 8 logits (pair per speaker).
  struct ForwardCache;
  Eigen::MatrixXd ForwardTrain(const TrainingExample &example,
                               ForwardCache *cache) const;
  void Backward(const ForwardCache &cache, const Eigen::MatrixXd &grad_logits);

  ParamRefs Params();
  const TsVadConfig &Config() const { return cfg_; }

  void Save(const std::string &path) const;
  static TsVadModel Load(const std::string &path);

  struct ForwardCache {
    Eigen::MatrixXd sd_in[4];
    BlstmProjected::Cache sd1[4], sd2[4];
    Eigen::MatrixXd sd1_out[4], sd_out[4];
    Eigen::MatrixXd combine_in;
    BlstmProjected::Cache combine;
    Eigen::MatrixXd combine_out;
  };

 private:
  TsVadConfig cfg_;
  BlstmProjected sd1_, sd2_;   // shared across speaker slots
  BlstmProjected combine_;
  std::vector<Linear> heads_;  // one per speaker slot

  friend struct TsVadGradCheckAccess;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_loss = 0.0;
  double learning_rate = 0.0;
};

// Mini-batch SGD with momentum, per-example random speaker permutation, and
// learning-rate halving when the dev loss stops improving. Deterministic
// under cfg.seed. Throws NumericError on divergence.
std::vector<EpochLog> TrainMulti(TsVadModel *model,
                                 const std::vector<TrainingExample> &train,
                                 const std::vector<TrainingExample> &dev);

// Shared SGD-with-momentum step, exposed for the other model trainers.
class SgdUpdater {
 public:
  explicit SgdUpdater(const ParamRefs &params);
  void Step(const ParamRefs &params, double learning_rate, double momentum);

 private:
  std::vector<Eigen::MatrixXd> velocity_;
};

}  // namespace tsdiar

#endif  // TSDIAR_NNET_TSVAD_H_
