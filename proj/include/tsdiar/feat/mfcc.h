// tsdiar/feat/mfcc.h

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

#ifndef TSDIAR_FEAT_MFCC_H_
#define TSDIAR_FEAT_MFCC_H_

#include <Eigen/Core>
#include <string>

#include "tsdiar/core/clock.h"
#include "tsdiar/io/wave.h"

namespace tsdiar {

struct MfccConfig {
  double window_sec = 0.025;
  double hop_sec = 0.010;
  int num_mel_filters = 23;
  int num_cepstra = 20;
  double pre_emphasis = 0.97;
  double dither = 0.0;
  double low_freq_hz = 20.0;
  double high_freq_hz = 7600.0;

  std::string Fingerprint() const;
};

struct FeatureMatrix {
  Eigen::MatrixXd values;  // T x F
  FrameClock clock;
  std::string config_fingerprint;

  int NumFrames() const { return static_cast<int>(values.rows()); }
  int Dim() const { return static_cast<int>(values.cols()); }
};

// Pre-emphasis -> Hamming window -> magnitude spectrum -> mel filterbank ->
// log -> DCT-II. A waveform shorter than one window yields an empty matrix.
FeatureMatrix ComputeMfcc(const Waveform &wave, const MfccConfig &cfg);

// Log mel filterbank energies (pre-DCT), exposed for testing against a
// direct DFT reference.
Eigen::MatrixXd ComputeLogMelEnergies(const Waveform &wave,
                                      const MfccConfig &cfg);

// Per-dimension zero mean, unit variance over the utterance (variance floor
// 1e-10). With fewer than two frames only the mean is removed.
FeatureMatrix Cmvn(const FeatureMatrix &feat);

// Mel filterbank weights, rows = filters, cols = FFT bins 0..nfft/2.
Eigen::MatrixXd MelFilterbank(int num_filters, int nfft, double sample_rate,
                              double low_freq, double high_freq);

}  // namespace tsdiar

#endif  // TSDIAR_FEAT_MFCC_H_
