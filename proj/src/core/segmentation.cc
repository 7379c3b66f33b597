// tsdiar/core/segmentation.cc

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

#include "tsdiar/core/segmentation.h"

#include <algorithm>
#include <map>
#include <set>

#include "tsdiar/core/uem.h"

namespace tsdiar {

double Segmentation::MaxEndTime() const {
  double end = 0.0;
  for (const auto &s : segments) end = std::max(end, s.End());
  return end;
}

std::vector<std::string> Segmentation::Speakers() const {
  std::set<std::string> ids;
  for (const auto &s : segments) ids.insert(s.speaker);
  return {ids.begin(), ids.end()};
}

double Segmentation::TotalSpeakerTime() const {
  double total = 0.0;
  for (const auto &s : segments) total += s.duration;
  return total;
}

Eigen::MatrixXi SegmentationToFrames(
    const Segmentation &seg, const FrameClock &clock,
    const std::vector<std::string> &speakers) {
  std::map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(speakers.size()); ++i)
    index[speakers[i]] = i;

  int num_frames = clock.NumFramesCovering(seg.MaxEndTime());
  Eigen::MatrixXi mask =
      Eigen::MatrixXi::Zero(num_frames, static_cast<int>(speakers.size()));

  for (const auto &s : seg.segments) {
    auto it = index.find(s.speaker);
    Require(it != index.end(),
            "SegmentationToFrames: unknown speaker id '" + s.speaker + "'");
    int first = clock.FirstFrameWithMidpointAtOrAfter(s.onset);
    for (int t = first; t < num_frames; ++t) {
      if (clock.FrameMidpoint(t) >= s.End() - kTimeEps) break;
      mask(t, it->second) = 1;
    }
  }
  return mask;
}

Segmentation FramesToSegmentation(const Eigen::MatrixXi &mask,
                                  const FrameClock &clock,
                                  const std::vector<std::string> &speakers,
                                  const std::string &file_id) {
  Require(mask.cols() == static_cast<Eigen::Index>(speakers.size()),
          "FramesToSegmentation: column/speaker count mismatch");
  Segmentation seg(file_id);
  for (Eigen::Index s = 0; s < mask.cols(); ++s) {
    Eigen::Index run_start = -1;
    for (Eigen::Index t = 0; t <= mask.rows(); ++t) {
      int v = (t < mask.rows()) ? mask(t, s) : 0;
      Require(v == 0 || v == 1, "FramesToSegmentation: non-binary entry");
      if (v == 1 && run_start < 0) run_start = t;
      if (v == 0 && run_start >= 0) {
        double onset = clock.FrameStart(static_cast<int>(run_start));
        double dur = (t - run_start) * clock.FrameDuration();
        seg.segments.emplace_back(speakers[s], onset, dur);
        run_start = -1;
      }
    }
  }
  return Normalize(seg);
}

Segmentation Normalize(const Segmentation &seg) {
  Segmentation out(seg.file_id);
  std::map<std::string, std::vector<Segment>> by_speaker;
  for (const auto &s : seg.segments) {
    Require(s.duration > 0.0, "Normalize: segment duration must be > 0");
    Require(std::isfinite(s.onset) && s.onset >= 0.0,
            "Normalize: segment onset must be finite and >= 0");
    by_speaker[s.speaker].push_back(s);
  }
  for (auto &[spk, segs] : by_speaker) {
    std::sort(segs.begin(), segs.end(),
              [](const Segment &a, const Segment &b) {
                return a.onset < b.onset;
              });
    Segment cur = segs.front();
    for (std::size_t i = 1; i < segs.size(); ++i) {
      const Segment &next = segs[i];
      if (next.onset <= cur.End() + kTimeEps) {
        cur.duration = std::max(cur.End(), next.End()) - cur.onset;
      } else {
        out.segments.push_back(cur);
        cur = next;
      }
    }
    out.segments.push_back(cur);
  }
  return out;  // map iteration is already (speaker, onset)-sorted
}

void UemMask::Canonicalize() {
  for (auto &[file, ivals] : regions) {
    std::sort(ivals.begin(), ivals.end(),
              [](const TimeInterval &a, const TimeInterval &b) {
                return a.onset < b.onset;
              });
    std::vector<TimeInterval> merged;
    for (const auto &iv : ivals) {
      if (!merged.empty() && iv.onset <= merged.back().offset + kTimeEps) {
        merged.back().offset = std::max(merged.back().offset, iv.offset);
      } else {
        merged.push_back(iv);
      }
    }
    ivals = std::move(merged);
  }
}

}  // namespace tsdiar
