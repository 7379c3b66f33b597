// tsdiar/core/segmentation.h

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

#ifndef TSDIAR_CORE_SEGMENTATION_H_
#define TSDIAR_CORE_SEGMENTATION_H_

#include <Eigen/Core>
#include <string>
#include <vector>

#include "tsdiar/core/clock.h"

namespace tsdiar {

struct Segment {
  std::string speaker;
  double onset = 0.0;     // seconds
  double duration = 0.0;  // seconds, > 0

  Segment() = default;
  Segment(std::string spk, double on, double dur)
      : speaker(std::move(spk)), onset(on), duration(dur) {}

  double End() const { return onset + duration; }
};

// Per-file set of speaker segments. Cross-speaker overlap is meaningful;
// per-speaker overlap is collapsed by Normalize().
struct Segmentation {
  std::string file_id;
  std::vector<Segment> segments;

  Segmentation() = default;
  explicit Segmentation(std::string id) : file_id(std::move(id)) {}

  bool Empty() const { return segments.empty(); }

  // Latest segment end, 0 when empty.
  double MaxEndTime() const;

  // Distinct speaker ids in lexicographic order.
  std::vector<std::string> Speakers() const;

  // Total per-speaker duration summed over speakers (overlap counted once
  // per speaker), assuming a normalized segmentation.
  double TotalSpeakerTime() const;
};

// Binary frame-activity matrix, one column per speaker. Frame membership is
// decided by the frame midpoint. Throws DataError on a speaker id missing
// from `speakers`.
Eigen::MatrixXi SegmentationToFrames(const Segmentation &seg,
                                     const FrameClock &clock,
                                     const std::vector<std::string> &speakers);

// Inverse of SegmentationToFrames on frame-aligned input: maximal runs of 1
// become segments. Throws DataError on non-binary entries.
Segmentation FramesToSegmentation(const Eigen::MatrixXi &mask,
                                  const FrameClock &clock,
                                  const std::vector<std::string> &speakers,
                                  const std::string &file_id = "");

// Merges per-speaker overlapping/adjacent segments, sorts by (speaker, onset).
Segmentation Normalize(const Segmentation &seg);

}  // namespace tsdiar

#endif  // TSDIAR_CORE_SEGMENTATION_H_
