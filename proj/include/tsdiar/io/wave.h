// tsdiar/io/wave.h

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

#ifndef TSDIAR_IO_WAVE_H_
#define TSDIAR_IO_WAVE_H_

#include <Eigen/Core>
#include <string>
#include <vector>

namespace tsdiar {

// Mono waveform, samples in [-1, 1].
struct Waveform {
  Eigen::VectorXd samples;
  int sample_rate_hz = 16000;

  int NumSamples() const { return static_cast<int>(samples.size()); }
  double Duration() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// One waveform per channel, equal length and rate.
struct MultiWaveform {
  std::vector<Eigen::VectorXd> channels;
  int sample_rate_hz = 16000;

  int NumChannels() const { return static_cast<int>(channels.size()); }
  int NumSamples() const {
    return channels.empty() ? 0 : static_cast<int>(channels[0].size());
  }
  Waveform Channel(int c) const { return {channels.at(c), sample_rate_hz}; }
};

// 16-bit PCM WAV.
MultiWaveform ReadWav(const std::string &path);
void WriteWav(const std::string &path, const MultiWaveform &wave);

}  // namespace tsdiar

#endif  // TSDIAR_IO_WAVE_H_
