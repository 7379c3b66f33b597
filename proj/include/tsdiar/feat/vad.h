// tsdiar/feat/vad.h

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

#ifndef TSDIAR_FEAT_VAD_H_
#define TSDIAR_FEAT_VAD_H_

#include <Eigen/Core>

#include "tsdiar/core/clock.h"
#include "tsdiar/io/wave.h"

namespace tsdiar {

struct EnergyVadConfig {
  double margin = 3.0;        // log-energy above the 20th percentile
  double percentile = 0.20;
  int median_taps = 11;
};

// Crude log-energy gate used only to seed clustering: speech iff log-energy
// exceeds (20th-percentile + margin), then median smoothed.
Eigen::VectorXi EnergyVad(const Waveform &wave, const FrameClock &clock,
                          const EnergyVadConfig &cfg = {});

}  // namespace tsdiar

#endif  // TSDIAR_FEAT_VAD_H_
