// tsdiar/cluster/cluster.h

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

#ifndef TSDIAR_CLUSTER_CLUSTER_H_
#define TSDIAR_CLUSTER_CLUSTER_H_

#include <Eigen/Core>
#include <string>
#include <vector>

#include "tsdiar/core/clock.h"
#include "tsdiar/core/segmentation.h"

namespace tsdiar {

// A clustering unit: a fixed window inside VAD speech, plus its embedding.
struct SubSegment {
  double onset = 0.0;
  double duration = 0.0;
  Eigen::VectorXd embedding;

  double End() const { return onset + duration; }
};

struct SubSegmentConfig {
  double window_sec = 1.5;
  double shift_sec = 0.75;
  double min_tail_sec = 0.5;
};

// Sliding windows clipped to speech regions of the VAD mask; a trailing
// window is kept when at least `min_tail_sec` long.
std::vector<SubSegment> MakeSubSegments(const Eigen::VectorXi &vad_mask,
                                        const FrameClock &clock,
                                        const SubSegmentConfig &cfg = {});

// Pairwise cosine similarities; throws DataError naming the index of a zero
// vector.
Eigen::MatrixXd CosineMatrix(const std::vector<Eigen::VectorXd> &embeddings);

// Row-top-q binarization with the q chosen to maximize the eigengap
// lambda_{k+1} - lambda_k of the normalized Laplacian. Returns the winning
// binary affinity (symmetrized by max); all-zero rows get a self-loop.
Eigen::MatrixXd BinarizeAuto(const Eigen::MatrixXd &similarity, int k = 4,
                             std::vector<double> *gap_by_q = nullptr);

// Normalized spectral clustering with seeded k-means++ (50 restarts).
std::vector<int> SpectralCluster(const Eigen::MatrixXd &affinity, int k = 4,
                                 std::uint64_t seed = 0);

// Average-linkage agglomeration on cosine distance down to k clusters;
// deterministic tie-break by smallest merged-index pair.
std::vector<int> Ahc(const std::vector<Eigen::VectorXd> &embeddings, int k = 4);

// Merges overlapping same-label spans into a segmentation with speakers
// named spk0..spk{k-1}.
Segmentation LabelsToSegmentation(const std::vector<SubSegment> &spans,
                                  const std::vector<int> &labels,
                                  const std::string &file_id = "");

}  // namespace tsdiar

#endif  // TSDIAR_CLUSTER_CLUSTER_H_
