// tsdiar/core/clock.h

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

#ifndef TSDIAR_CORE_CLOCK_H_
#define TSDIAR_CORE_CLOCK_H_

#include <cmath>

#include "tsdiar/util/common.h"

namespace tsdiar {

// Uniform frame grid. Frame i covers [i/rate, (i+1)/rate); membership tests
// use the frame midpoint.
struct FrameClock {
  double frame_rate_hz = 100.0;

  FrameClock() = default;
  explicit FrameClock(double rate) : frame_rate_hz(rate) {
    Require(rate > 0.0, "FrameClock: frame rate must be positive");
  }

  double FrameDuration() const { return 1.0 / frame_rate_hz; }

  double FrameStart(int i) const { return i / frame_rate_hz; }

  double FrameMidpoint(int i) const { return (i + 0.5) / frame_rate_hz; }

  // Number of frames needed to cover [0, end_time).
  int NumFramesCovering(double end_time) const {
    if (end_time <= 0.0) return 0;
    return static_cast<int>(std::ceil(end_time * frame_rate_hz - kTimeEps));
  }

  // First frame whose midpoint is >= t.
  int FirstFrameWithMidpointAtOrAfter(double t) const {
    int i = static_cast<int>(std::ceil(t * frame_rate_hz - 0.5 - kTimeEps));
    return i < 0 ? 0 : i;
  }

  bool operator==(const FrameClock &o) const {
    return frame_rate_hz == o.frame_rate_hz;
  }
};

}  // namespace tsdiar

#endif  // TSDIAR_CORE_CLOCK_H_
