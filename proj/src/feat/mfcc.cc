// tsdiar/feat/mfcc.cc

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

#include "tsdiar/feat/mfcc.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "tsdiar/feat/fft.h"
#include "tsdiar/util/common.h"

namespace tsdiar {

namespace {

constexpr double kLogEnergyFloor = 1e-10;

double HzToMel(double hz) { return 1127.0 * std::log1p(hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::exp(mel / 1127.0) - 1.0); }

}  // namespace

std::string MfccConfig::Fingerprint() const {
  std::ostringstream os;
  os << "mfcc:" << window_sec << ":" << hop_sec << ":" << num_mel_filters
     << ":" << num_cepstra << ":" << pre_emphasis << ":" << dither << ":"
     << low_freq_hz << ":" << high_freq_hz;
  return ToHex(Fnv1a64(os.str().data(), os.str().size()));
}

Eigen::MatrixXd MelFilterbank(int num_filters, int nfft, double sample_rate,
                              double low_freq, double high_freq) {
  Require(high_freq <= sample_rate / 2.0 + kTimeEps,
          "MelFilterbank: high edge exceeds Nyquist");
  int num_bins = nfft / 2 + 1;
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(num_filters, num_bins);
  double mel_lo = HzToMel(low_freq), mel_hi = HzToMel(high_freq);
  // num_filters triangles on a uniform mel grid with shared edges
  std::vector<double> centers(num_filters + 2);
  for (int i = 0; i < num_filters + 2; ++i)
    centers[i] =
        MelToHz(mel_lo + (mel_hi - mel_lo) * i / (num_filters + 1));
  for (int m = 0; m < num_filters; ++m) {
    double left = centers[m], mid = centers[m + 1], right = centers[m + 2];
    for (int k = 0; k < num_bins; ++k) {
      double f = k * sample_rate / nfft;
      if (f <= left || f >= right) continue;
      fb(m, k) = f <= mid ? (f - left) / (mid - left)
                          : (right - f) / (right - mid);
    }
  }
  return fb;
}

Eigen::MatrixXd ComputeLogMelEnergies(const Waveform &wave,
                                      const MfccConfig &cfg) {
  const int sr = wave.sample_rate_hz;
  Require(sr >= 2.0 * cfg.high_freq_hz,
          "ComputeLogMelEnergies: sample rate below twice the top mel edge");
  const int win = static_cast<int>(std::lround(cfg.window_sec * sr));
  const int hop = static_cast<int>(std::lround(cfg.hop_sec * sr));
  Require(hop <= win && hop > 0, "ComputeLogMelEnergies: hop must be in (0, window]");
  const int n = wave.NumSamples();
  const int num_frames = n >= win ? (n - win) / hop + 1 : 0;
  const int nfft = NextPowerOfTwo(win);

  Eigen::MatrixXd fb =
      MelFilterbank(cfg.num_mel_filters, nfft, sr, cfg.low_freq_hz,
                    cfg.high_freq_hz);
  Eigen::MatrixXd out(num_frames, cfg.num_mel_filters);

  std::vector<double> hamming(win);
  for (int i = 0; i < win; ++i)
    hamming[i] = 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (win - 1));

  std::vector<double> frame(win);
  for (int t = 0; t < num_frames; ++t) {
    const int off = t * hop;
    for (int i = 0; i < win; ++i) {
      double prev = (off + i > 0) ? wave.samples(off + i - 1) : 0.0;
      frame[i] = (wave.samples(off + i) - cfg.pre_emphasis * prev) * hamming[i];
    }
    auto mag = MagnitudeSpectrum(frame, nfft);
    Eigen::Map<Eigen::VectorXd> magv(mag.data(), static_cast<Eigen::Index>(mag.size()));
    Eigen::VectorXd power = magv.array().square();
    Eigen::VectorXd energies = fb * power;
    for (int m = 0; m < cfg.num_mel_filters; ++m)
      out(t, m) = std::log(std::max(energies(m), kLogEnergyFloor));
  }
  return out;
}

FeatureMatrix ComputeMfcc(const Waveform &wave, const MfccConfig &cfg) {
  Require(cfg.num_cepstra <= cfg.num_mel_filters,
          "ComputeMfcc: more cepstra than mel filters");
  Eigen::MatrixXd logmel = ComputeLogMelEnergies(wave, cfg);

  // Orthonormal DCT-II over the filter axis.
  const int m = cfg.num_mel_filters, f = cfg.num_cepstra;
  Eigen::MatrixXd dct(f, m);
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < m; ++j)
      dct(i, j) = std::sqrt((i == 0 ? 1.0 : 2.0) / m) *
                  std::cos(M_PI * i * (j + 0.5) / m);

  FeatureMatrix feat;
  feat.values = logmel * dct.transpose();
  feat.clock = FrameClock(1.0 / cfg.hop_sec);
  feat.config_fingerprint = cfg.Fingerprint();
  Require(feat.values.allFinite(), "ComputeMfcc: non-finite feature value");
  return feat;
}

FeatureMatrix Cmvn(const FeatureMatrix &feat) {
  FeatureMatrix out = feat;
  const Eigen::Index t = feat.values.rows();
  if (t == 0) return out;
  Eigen::RowVectorXd mean = feat.values.colwise().mean();
  out.values.rowwise() -= mean;
  if (t >= 2) {
    Eigen::RowVectorXd var =
        out.values.array().square().colwise().sum() / static_cast<double>(t);
    Eigen::RowVectorXd scale =
        var.array().max(1e-10).sqrt().inverse();
    out.values = out.values.array().rowwise() * scale.array();
  }
  return out;
}

}  // namespace tsdiar
