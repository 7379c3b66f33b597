// tsdiar/core/prob_stream.h

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

#ifndef TSDIAR_CORE_PROB_STREAM_H_
#define TSDIAR_CORE_PROB_STREAM_H_

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "tsdiar/core/clock.h"
#include "tsdiar/util/common.h"

namespace tsdiar {

// Per-frame, per-speaker activity probabilities; the pipeline's central
// currency. T x S, entries in [0, 1].
struct ProbStream {
  Eigen::MatrixXd values;  // T x S
  FrameClock clock;
  std::vector<std::string> speaker_ids;

  ProbStream() = default;
  ProbStream(Eigen::MatrixXd v, FrameClock c, std::vector<std::string> ids)
      : values(std::move(v)), clock(c), speaker_ids(std::move(ids)) {
    Validate();
  }

  int NumFrames() const { return static_cast<int>(values.rows()); }
  int NumSpeakers() const { return static_cast<int>(values.cols()); }

  void Validate() const {
    Require(static_cast<int>(speaker_ids.size()) == values.cols(),
            "ProbStream: speaker_ids size must match column count");
    Require(values.cols() >= 1, "ProbStream: need at least one speaker");
    for (Eigen::Index t = 0; t < values.rows(); ++t)
      for (Eigen::Index s = 0; s < values.cols(); ++s) {
        double p = values(t, s);
        Require(p >= 0.0 && p <= 1.0 && std::isfinite(p),
                "ProbStream: entry out of [0,1]");
      }
  }
};

}  // namespace tsdiar

#endif  // TSDIAR_CORE_PROB_STREAM_H_
