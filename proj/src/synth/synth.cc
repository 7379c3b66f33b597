// tsdiar/synth/synth.cc

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

#include "tsdiar/synth/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsdiar/util/common.h"
#include "tsdiar/util/rng.h"

namespace tsdiar {

namespace {

struct DwellEvent {
  int state;       // number of simultaneously active speakers
  double duration;
};

// Moment-matched dwell means for a birth-death embedded chain with fixed
// interior up-probability: occupancy_k is proportional to nu_k * dwell_k,
// so dwell_k = s * pi_k / nu_k with s chosen to respect the minimum dwell.
struct ChainParams {
  int lo = 0, hi = 0;                 // support range
  std::array<double, 5> up_prob{};    // P(k -> k+1) within the support
  std::array<double, 5> dwell_mean{};
};

ChainParams MatchMoments(const std::array<double, 5> &pi, double min_dwell) {
  ChainParams cp;
  int lo = -1, hi = -1;
  for (int k = 0; k < 5; ++k)
    if (pi[k] > 0.0) {
      if (lo < 0) lo = k;
      hi = k;
    }
  Require(lo >= 0, "MatchMoments: distribution has no support");
  for (int k = lo + 1; k < hi; ++k)
    Require(pi[k] > 0.0,
            "MatchMoments: unreachable distribution (zero-probability bin "
            "between occupied bins)");
  cp.lo = lo;
  cp.hi = hi;
  if (lo == hi) {
    cp.dwell_mean[lo] = min_dwell;
    return cp;
  }

  constexpr double kInteriorUp = 0.3;
  std::array<double, 5> nu{};
  nu[lo] = 1.0;
  for (int k = lo; k < hi; ++k) {
    cp.up_prob[k] = (k == lo) ? 1.0 : kInteriorUp;
    double down_next = (k + 1 == hi) ? 1.0 : 1.0 - kInteriorUp;
    nu[k + 1] = nu[k] * cp.up_prob[k] / down_next;
  }
  cp.up_prob[hi] = 0.0;

  double scale = 0.0;
  for (int k = lo; k <= hi; ++k)
    scale = std::max(scale, min_dwell * nu[k] / pi[k]);
  for (int k = lo; k <= hi; ++k) cp.dwell_mean[k] = scale * pi[k] / nu[k];
  return cp;
}

std::vector<DwellEvent> SampleTimeline(const ChainParams &cp, double duration,
                                       double min_dwell,
                                       const std::array<double, 5> &pi,
                                       Rng *rng) {
  std::vector<DwellEvent> events;
  // stationary-ish start: quantile draw from pi
  double u = rng->Uniform();
  int state = cp.hi;
  double acc = 0.0;
  for (int k = cp.lo; k <= cp.hi; ++k) {
    acc += pi[k];
    if (u < acc) {
      state = k;
      break;
    }
  }
  double t = 0.0;
  while (t < duration) {
    double dwell =
        std::max(min_dwell, cp.dwell_mean[state] * rng->Uniform(0.85, 1.15));
    if (t + dwell >= duration || duration - (t + dwell) < min_dwell) {
      // land exactly on the session boundary so no dwell gets truncated
      // below the minimum
      dwell = duration - t;
      events.push_back({state, dwell});
      break;
    }
    events.push_back({state, dwell});
    t += dwell;
    if (cp.lo != cp.hi)
      state += (rng->Uniform() < cp.up_prob[state]) ? 1 : -1;
  }
  return events;
}

std::array<double, 5> TimelineOccupancy(const std::vector<DwellEvent> &events,
                                        double duration) {
  std::array<double, 5> occ{};
  for (const auto &e : events) occ[e.state] += e.duration / duration;
  return occ;
}

// One fade-ramped utterance of a voiced source: impulse train at a slowly
// wandering f0 through three parallel two-pole resonators.
void SynthesizeUtterance(const SpeakerVoice &voice, double onset, double dur,
                         int sr, Rng *rng, Eigen::VectorXd *stream) {
  const int n0 = static_cast<int>(std::lround(onset * sr));
  const int n = static_cast<int>(std::lround(dur * sr));
  if (n <= 0) return;

  const double bandwidth_hz = 90.0;
  const double r = std::exp(-M_PI * bandwidth_hz / sr);
  std::array<double, 3> b1{}, b2{}, y1{}, y2{}, gain{};
  for (int i = 0; i < 3; ++i) {
    b1[i] = 2.0 * r * std::cos(2.0 * M_PI * voice.formants_hz[i] / sr);
    b2[i] = -r * r;
    gain[i] = (1.0 - r) * std::pow(static_cast<double>(i + 1),
                                   voice.spectral_tilt);
  }

  double f0 = rng->Uniform(voice.f0_min_hz, voice.f0_max_hz);
  double phase = 1.0;  // emit a pulse on the first sample
  const int ramp = std::min(n / 2, sr / 50);  // 20 ms fade

  for (int i = 0; i < n; ++i) {
    phase += f0 / sr;
    double pulse = 0.0;
    if (phase >= 1.0) {
      phase -= 1.0;
      pulse = 1.0;
      // slow pitch wander, reflected at the range bounds
      f0 += rng->Normal(0.0, 1.5);
      if (f0 < voice.f0_min_hz) f0 = 2.0 * voice.f0_min_hz - f0;
      if (f0 > voice.f0_max_hz) f0 = 2.0 * voice.f0_max_hz - f0;
    }
    double sample = 0.0;
    for (int j = 0; j < 3; ++j) {
      double y = gain[j] * pulse + b1[j] * y1[j] + b2[j] * y2[j];
      y2[j] = y1[j];
      y1[j] = y;
      sample += y;
    }
    double fade = 1.0;
    if (i < ramp) fade = 0.5 - 0.5 * std::cos(M_PI * i / ramp);
    if (n - 1 - i < ramp) fade = std::min(fade, 0.5 - 0.5 * std::cos(M_PI * (n - 1 - i) / ramp));
    int idx = n0 + i;
    if (idx >= 0 && idx < stream->size()) (*stream)(idx) += fade * sample;
  }
}

std::vector<SpeakerVoice> SampleVoices(int num_speakers, int sr, Rng *rng) {
  std::vector<SpeakerVoice> voices;
  const double nyquist = sr / 2.0;
  while (static_cast<int>(voices.size()) < num_speakers) {
    SpeakerVoice v;
    v.id = "spk" + std::to_string(voices.size());
    v.formants_hz = {rng->Uniform(300.0, 900.0), rng->Uniform(1000.0, 2300.0),
                     rng->Uniform(2500.0, 3500.0)};
    double f0_base = rng->Uniform(90.0, 240.0);
    v.f0_min_hz = f0_base * 0.9;
    v.f0_max_hz = f0_base * 1.1;
    v.spectral_tilt = rng->Uniform(-0.9, -0.3);
    Require(v.formants_hz[2] < nyquist, "SampleVoices: formant above Nyquist");

    bool distinct = true;
    for (const auto &o : voices) {
      double d = std::hypot(v.formants_hz[0] - o.formants_hz[0],
                            v.formants_hz[1] - o.formants_hz[1]);
      if (d < 250.0) distinct = false;
    }
    if (distinct) voices.push_back(v);
  }
  return voices;
}

void ValidateConfig(const SessionConfig &cfg) {
  Require(cfg.num_speakers == 4, "GenerateSession: num_speakers must be 4");
  Require(cfg.num_channels >= 1, "GenerateSession: need at least one channel");
  Require(cfg.duration_sec > 0.0, "GenerateSession: duration must be positive");
  double sum = std::accumulate(cfg.overlap_distribution.begin(),
                               cfg.overlap_distribution.end(), 0.0);
  Require(std::abs(sum - 1.0) < 1e-6,
          "GenerateSession: overlap distribution must sum to 1");
  for (double p : cfg.overlap_distribution)
    Require(p >= 0.0, "GenerateSession: negative probability");
}

}  // namespace

SynthSession GenerateSession(const SessionConfig &cfg) {
  ValidateConfig(cfg);
  Rng rng(cfg.seed);

  // Occupancy tolerance: 0.015 at 600 s leaves headroom inside the +-0.02
  // contract; shorter sessions only support proportionally looser targets.
  const double margin = 0.015 * std::max(1.0, 600.0 / cfg.duration_sec);
  ChainParams cp = MatchMoments(cfg.overlap_distribution, cfg.min_dwell_sec);

  std::vector<DwellEvent> timeline;
  bool accepted = false;
  for (int attempt = 0; attempt < 10000 && !accepted; ++attempt) {
    timeline = SampleTimeline(cp, cfg.duration_sec, cfg.min_dwell_sec,
                              cfg.overlap_distribution, &rng);
    auto occ = TimelineOccupancy(timeline, cfg.duration_sec);
    accepted = true;
    for (int k = 0; k < 5; ++k)
      if (std::abs(occ[k] - cfg.overlap_distribution[k]) > margin)
        accepted = false;
  }
  Require(accepted,
          "GenerateSession: could not realize the target overlap "
          "distribution; unreachable configuration");

  // Assign concrete speakers to the k-active timeline.
  SynthSession session;
  session.file_id = cfg.file_id;
  session.voices = SampleVoices(cfg.num_speakers, cfg.sample_rate_hz, &rng);
  session.reference = Segmentation(cfg.file_id);

  std::vector<int> active, inactive;
  for (int s = 0; s < cfg.num_speakers; ++s) inactive.push_back(s);
  std::vector<double> active_since(cfg.num_speakers, -1.0);
  double t = 0.0;
  auto activate = [&](double now) {
    int pick = rng.UniformInt(static_cast<int>(inactive.size()));
    int spk = inactive[pick];
    inactive.erase(inactive.begin() + pick);
    active.push_back(spk);
    active_since[spk] = now;
  };
  auto deactivate = [&](double now) {
    int pick = rng.UniformInt(static_cast<int>(active.size()));
    int spk = active[pick];
    active.erase(active.begin() + pick);
    inactive.push_back(spk);
    std::sort(inactive.begin(), inactive.end());
    session.reference.segments.emplace_back(session.voices[spk].id,
                                            active_since[spk],
                                            now - active_since[spk]);
    active_since[spk] = -1.0;
  };
  for (const auto &event : timeline) {
    while (static_cast<int>(active.size()) < event.state) activate(t);
    while (static_cast<int>(active.size()) > event.state) deactivate(t);
    t += event.duration;
  }
  while (!active.empty()) deactivate(cfg.duration_sec);
  session.reference = Normalize(session.reference);

  // Voice every utterance into per-speaker clean streams.
  const int sr = cfg.sample_rate_hz;
  const int num_samples = static_cast<int>(std::lround(cfg.duration_sec * sr));
  session.clean_streams.assign(cfg.num_speakers,
                               Eigen::VectorXd::Zero(num_samples));
  std::vector<Rng> voice_rngs;
  for (int s = 0; s < cfg.num_speakers; ++s) voice_rngs.push_back(rng.Fork(s));
  for (const auto &seg : session.reference.segments) {
    int spk = -1;
    for (int s = 0; s < cfg.num_speakers; ++s)
      if (session.voices[s].id == seg.speaker) spk = s;
    SynthesizeUtterance(session.voices[spk], seg.onset, seg.duration, sr,
                        &voice_rngs[spk], &session.clean_streams[spk]);
  }

  // Equalize speaker loudness over their own active time.
  for (int s = 0; s < cfg.num_speakers; ++s) {
    double energy = 0.0;
    long active_samples = 0;
    for (const auto &seg : session.reference.segments) {
      if (seg.speaker != session.voices[s].id) continue;
      int a = static_cast<int>(std::lround(seg.onset * sr));
      int b = std::min(num_samples,
                       static_cast<int>(std::lround(seg.End() * sr)));
      if (b <= a) continue;
      energy += session.clean_streams[s].segment(a, b - a).squaredNorm();
      active_samples += b - a;
    }
    double rms = active_samples ? std::sqrt(energy / active_samples) : 0.0;
    if (rms > 1e-12) session.clean_streams[s] *= 0.05 / rms;
  }

  // Channel mix: delay, attenuate, add white noise at the configured SNR.
  std::vector<int> delays = cfg.channel_delays_samples;
  std::vector<double> attens = cfg.channel_attenuations;
  for (int c = static_cast<int>(delays.size()); c < cfg.num_channels; ++c)
    delays.push_back((c * 3) % 9);
  for (int c = static_cast<int>(attens.size()); c < cfg.num_channels; ++c)
    attens.push_back(1.0 - 0.3 * c / std::max(1, cfg.num_channels - 1));

  session.audio.sample_rate_hz = sr;
  session.audio.channels.assign(cfg.num_channels,
                                Eigen::VectorXd::Zero(num_samples));
  for (int c = 0; c < cfg.num_channels; ++c) {
    Eigen::VectorXd &ch = session.audio.channels[c];
    for (int s = 0; s < cfg.num_speakers; ++s) {
      const auto &src = session.clean_streams[s];
      int d = delays[c];
      ch.segment(d, num_samples - d) += src.segment(0, num_samples - d);
    }
    ch *= attens[c];
    double power = ch.squaredNorm() / std::max(1, num_samples);
    double sigma = power > 1e-12
                       ? std::sqrt(power / std::pow(10.0, cfg.noise_snr_db / 10.0))
                       : 1e-4;
    for (int i = 0; i < num_samples; ++i) ch(i) += sigma * rng.Normal();
  }

  // Headroom guard before 16-bit quantization.
  double peak = 0.0;
  for (const auto &ch : session.audio.channels)
    peak = std::max(peak, ch.cwiseAbs().maxCoeff());
  if (peak > 0.99) {
    double g = 0.99 / peak;
    for (auto &ch : session.audio.channels) ch *= g;
    for (auto &st : session.clean_streams) st *= g;
  }
  return session;
}

std::array<double, 5> OverlapStats(const Segmentation &seg, double total_dur) {
  Require(total_dur >= seg.MaxEndTime() - kTimeEps,
          "OverlapStats: total duration shorter than the segmentation");
  std::array<double, 5> stats{};
  Segmentation norm = Normalize(seg);
  std::vector<std::pair<double, int>> events;
  for (const auto &s : norm.segments) {
    events.emplace_back(s.onset, +1);
    events.emplace_back(s.End(), -1);
  }
  events.emplace_back(total_dur, 0);
  std::sort(events.begin(), events.end());
  double prev = 0.0;
  int k = 0;
  for (const auto &[time, delta] : events) {
    if (time > prev) {
      stats[std::min(k, 4)] += (time - prev) / total_dur;
      prev = time;
    }
    k += delta;
  }
  return stats;
}

}  // namespace tsdiar
