// tsdiar/synth/synth.h

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

#ifndef TSDIAR_SYNTH_SYNTH_H_
#define TSDIAR_SYNTH_SYNTH_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tsdiar/core/segmentation.h"
#include "tsdiar/io/wave.h"

namespace tsdiar {

// Speaker identity carried by a stationary spectral envelope: three
// resonances plus tilt, which is exactly what GMM-based embeddings capture.
struct SpeakerVoice {
  std::string id;
  std::array<double, 3> formants_hz{};
  double f0_min_hz = 100.0;
  double f0_max_hz = 140.0;
  double spectral_tilt = -0.6;  // amplitude exponent over formant index
};

struct SessionConfig {
  int num_speakers = 4;
  double duration_sec = 600.0;
  // P(exactly k speakers active), k = 0..4. Default: CHiME-6-like dev mix.
  std::array<double, 5> overlap_distribution{0.2405, 0.5425, 0.1774, 0.0349,
                                             0.0047};
  int num_channels = 4;
  std::vector<int> channel_delays_samples;       // defaults 0,3,5,8,...
  std::vector<double> channel_attenuations;      // defaults 1.0..0.7
  double noise_snr_db = 20.0;
  int sample_rate_hz = 16000;
  std::uint64_t seed = 0;
  double min_dwell_sec = 0.5;
  std::string file_id = "S0000";
};

struct SynthSession {
  std::string file_id;
  MultiWaveform audio;
  Segmentation reference;
  // Per-speaker clean source streams (full session length, pre-attenuation).
  std::vector<Eigen::VectorXd> clean_streams;
  std::vector<SpeakerVoice> voices;
};

// Samples speaker activity from a 5-state semi-Markov chain over "k speakers
// active" (moment-matched to the target occupancy, verified on the realized
// timeline), voices each active speaker with a harmonic source shaped by
// their formants, and mixes channels with per-channel delay/attenuation plus
// white noise at the configured SNR. Deterministic per seed.
SynthSession GenerateSession(const SessionConfig &cfg);

// Fraction of [0, total_dur) with exactly k active speakers, k = 0..4.
std::array<double, 5> OverlapStats(const Segmentation &seg, double total_dur);

}  // namespace tsdiar

#endif  // TSDIAR_SYNTH_SYNTH_H_
