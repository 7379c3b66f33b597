// tsdiar/score/score.h

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

#ifndef TSDIAR_SCORE_SCORE_H_
#define TSDIAR_SCORE_SCORE_H_

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "tsdiar/core/segmentation.h"
#include "tsdiar/core/uem.h"

namespace tsdiar {

// Collar-free, overlap-scored DER components in seconds.
struct DerBreakdown {
  double miss = 0.0;
  double false_alarm = 0.0;
  double confusion = 0.0;
  double total = 0.0;  // reference speaker-time

  double Der() const { return (miss + false_alarm + confusion) / total; }
};

struct JerBreakdown {
  double jer = 0.0;  // unweighted mean over reference speakers
  std::vector<std::pair<std::string, double>> per_speaker;
};

// Injective partial map hypothesis speaker -> reference speaker, chosen to
// maximize total overlap duration. Zero-overlap pairs stay unmapped.
using SpeakerMap = std::map<std::string, std::string>;

// Maximum-weight assignment on the hyp x ref overlap-duration matrix
// (Hungarian algorithm); ties broken lexicographically by construction order.
SpeakerMap OptimalMapping(const Segmentation &ref, const Segmentation &hyp,
                          const UemMask &uem = {});

// Frame-rasterized DER at the clock resolution (default 10 ms), collar 0,
// overlap scored. Throws DataError when the reference is empty.
DerBreakdown ComputeDer(const Segmentation &ref, const Segmentation &hyp,
                        const UemMask &uem = {},
                        const FrameClock &clock = FrameClock(100.0));

// Jaccard error rate per the DIHARD definition over UEM-masked frame
// supports, using OptimalMapping's speaker pairing.
JerBreakdown ComputeJer(const Segmentation &ref, const Segmentation &hyp,
                        const UemMask &uem = {},
                        const FrameClock &clock = FrameClock(100.0));

// Multi-file scoring: components summed across files (duration-weighted DER),
// JER averaged over all reference speakers of all files.
struct CorpusScore {
  DerBreakdown der;
  double jer = 0.0;
  std::map<std::string, DerBreakdown> per_file_der;
  std::map<std::string, JerBreakdown> per_file_jer;
};

CorpusScore ScoreCorpus(const std::map<std::string, Segmentation> &ref,
                        const std::map<std::string, Segmentation> &hyp,
                        const UemMask &uem = {},
                        const FrameClock &clock = FrameClock(100.0));

// Miss fraction incurred by keeping one active speaker per overlapped
// instant: sum over k>=2 of (k-1)*dur(k) divided by total speaker-time.
double SingleSpeakerCollapseBound(const Segmentation &seg);

// Solves max-weight assignment for a (possibly rectangular) weight matrix;
// returns per-row assigned column or -1. Exposed for reuse and testing.
std::vector<int> MaxWeightAssignment(const Eigen::MatrixXd &weights);

}  // namespace tsdiar

#endif  // TSDIAR_SCORE_SCORE_H_
