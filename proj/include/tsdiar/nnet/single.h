// tsdiar/nnet/single.h

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

#ifndef TSDIAR_NNET_SINGLE_H_
#define TSDIAR_NNET_SINGLE_H_

#include <string>
#include <vector>

#include "tsdiar/nnet/lstm.h"

namespace tsdiar {

// Classes of the single-speaker detector.
enum SingleClass { kSilence = 0, kTargetSpeech = 1, kNonTargetSpeech = 2 };

struct SingleSpeakerConfig {
  int feat_dim = 20;
  int ivector_dim = 32;
  int hidden = 64;
  int proj = 32;
  double learning_rate = 0.01;
  double momentum = 0.9;
  double lr_decay = 0.5;
  int batch_chunks = 8;
  int num_epochs = 10;
  std::uint64_t seed = 0;
};

// Features, one conditioning i-vector, and one-hot 3-class targets.
struct SingleExample {
  Eigen::MatrixXd feat;      // T x F
  Eigen::VectorXd ivector;   // D
  Eigen::MatrixXd targets;   // T x 3
  std::string target_speaker;
};

// Same features with a different speaker's i-vector; target and non-target
// speech labels swap, silence stays. Throws on a same-speaker swap.
SingleExample MakeNegativeExample(const SingleExample &example,
                                  const Eigen::VectorXd &other_ivector,
                                  const std::string &other_speaker);

// 3-layer BLSTMP with a 3-class softmax output (silence, target speech,
// non-target speech).
class SingleSpeakerModel {
 public:
  explicit SingleSpeakerModel(const SingleSpeakerConfig &cfg);
  SingleSpeakerModel() = default;

  // T x 3 per-frame class probabilities; rows sum to 1.
  Eigen::MatrixXd Forward(const Eigen::MatrixXd &feat,
                          const Eigen::VectorXd &ivector) const;

  struct ForwardCache {
    Eigen::MatrixXd in;
    BlstmProjected::Cache l1, l2, l3;
    Eigen::MatrixXd out1, out2, out3;
  };
  Eigen::MatrixXd ForwardTrain(const SingleExample &example,
                               ForwardCache *cache) const;  // T x 3 logits
  void Backward(const ForwardCache &cache, const Eigen::MatrixXd &grad_logits);

  ParamRefs Params();
  const SingleSpeakerConfig &Config() const { return cfg_; }

  void Save(const std::string &path) const;
  static SingleSpeakerModel Load(const std::string &path);

 private:
  SingleSpeakerConfig cfg_;
  BlstmProjected l1_, l2_, l3_;
  Linear head_;
};

// Softmax cross-entropy over the 3 classes, averaged over frames.
double SoftmaxLoss(const Eigen::MatrixXd &logits, const Eigen::MatrixXd &targets,
                   Eigen::MatrixXd *grad_logits = nullptr);

std::vector<EpochLog> TrainSingle(SingleSpeakerModel *model,
                                  const std::vector<SingleExample> &train,
                                  const std::vector<SingleExample> &dev);

}  // namespace tsdiar

#endif  // TSDIAR_NNET_SINGLE_H_
