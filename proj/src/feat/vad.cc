// tsdiar/feat/vad.cc

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

#include "tsdiar/feat/vad.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tsdiar/util/common.h"

namespace tsdiar {

Eigen::VectorXi EnergyVad(const Waveform &wave, const FrameClock &clock,
                          const EnergyVadConfig &cfg) {
  const int sr = wave.sample_rate_hz;
  const int hop = static_cast<int>(std::lround(sr / clock.frame_rate_hz));
  const int win = hop * 2 + hop / 2;  // 25 ms at the default 10 ms hop
  const int n = wave.NumSamples();
  const int num_frames = n >= win ? (n - win) / hop + 1 : 0;
  if (num_frames == 0) return Eigen::VectorXi();

  Eigen::VectorXd log_energy(num_frames);
  for (int t = 0; t < num_frames; ++t) {
    double e = wave.samples.segment(t * hop, win).squaredNorm();
    log_energy(t) = std::log(std::max(e, 1e-12));
  }

  std::vector<double> sorted(log_energy.data(), log_energy.data() + num_frames);
  std::sort(sorted.begin(), sorted.end());
  int idx = static_cast<int>(std::lround(cfg.percentile * (num_frames - 1)));
  // The noise-floor-relative rule alone cannot fire on a session that is
  // speech throughout, so cap the threshold at an absolute level (mean
  // square 1e-4 per sample, i.e. amplitude ~0.01).
  double absolute = std::log(win * 1e-4);
  double threshold = std::min(sorted[idx] + cfg.margin, absolute);

  Eigen::VectorXi raw(num_frames);
  for (int t = 0; t < num_frames; ++t)
    raw(t) = log_energy(t) > threshold ? 1 : 0;

  // median smoothing with edge replication
  Require(cfg.median_taps % 2 == 1, "EnergyVad: median taps must be odd");
  const int half = cfg.median_taps / 2;
  Eigen::VectorXi out(num_frames);
  std::vector<int> window(cfg.median_taps);
  for (int t = 0; t < num_frames; ++t) {
    for (int k = -half; k <= half; ++k) {
      int i = std::clamp(t + k, 0, num_frames - 1);
      window[k + half] = raw(i);
    }
    std::nth_element(window.begin(), window.begin() + half, window.end());
    out(t) = window[half];
  }
  return out;
}

}  // namespace tsdiar
