// tests/test_feat.cc

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "testutil.h"
#include "tsdiar/feat/fft.h"
#include "tsdiar/feat/mfcc.h"
#include "tsdiar/feat/vad.h"

using namespace tsdiar;

namespace {

Waveform Sine(double freq, double dur, double amp = 0.5, int sr = 16000) {
  Waveform w;
  w.sample_rate_hz = sr;
  int n = static_cast<int>(dur * sr);
  w.samples.resize(n);
  for (int i = 0; i < n; ++i)
    w.samples(i) = amp * std::sin(2.0 * M_PI * freq * i / sr);
  return w;
}

}  // namespace

TEST_CASE("fft matches direct dft") {
  Rng rng(5);
  std::vector<std::complex<double>> x(64);
  for (auto &v : x) v = {rng.Normal(), rng.Normal()};
  auto y = x;
  Fft(&y);
  for (int k = 0; k < 64; ++k) {
    std::complex<double> ref(0.0, 0.0);
    for (int t = 0; t < 64; ++t)
      ref += x[t] * std::exp(std::complex<double>(0, -2.0 * M_PI * k * t / 64));
    CHECK(std::abs(y[k] - ref) < 1e-9);
  }
  Fft(&y, /*inverse=*/true);
  for (int t = 0; t < 64; ++t) CHECK(std::abs(y[t] - x[t]) < 1e-12);
}

TEST_CASE("mfcc frame count formula") {
  Waveform w;
  w.samples = Eigen::VectorXd::Zero(16000);
  auto feat = ComputeMfcc(w, MfccConfig{});
  CHECK(feat.NumFrames() == 98);
  CHECK(feat.Dim() == 20);
}

TEST_CASE("waveform shorter than a window yields an empty matrix") {
  Waveform w;
  w.samples = Eigen::VectorXd::Zero(300);
  auto feat = ComputeMfcc(w, MfccConfig{});
  CHECK(feat.NumFrames() == 0);
}

TEST_CASE("c0 of silence is constant across frames") {
  Waveform w;
  w.samples = Eigen::VectorXd::Zero(16000);
  auto feat = ComputeMfcc(w, MfccConfig{});
  for (int t = 1; t < feat.NumFrames(); ++t)
    CHECK(std::abs(feat.values(t, 0) - feat.values(0, 0)) < 1e-6);
}

TEST_CASE("filterbank energies match a direct DFT reference on a 1 kHz sine") {
  MfccConfig cfg;
  auto w = Sine(1000.0, 0.2);
  auto logmel = ComputeLogMelEnergies(w, cfg);

  // Independent straightforward DFT oracle for a middle frame.
  const int sr = w.sample_rate_hz;
  const int win = 400, hop = 160, nfft = 512;
  const int t = 5;
  std::vector<double> frame(win);
  for (int i = 0; i < win; ++i) {
    double prev = (t * hop + i > 0) ? w.samples(t * hop + i - 1) : 0.0;
    double hamming = 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (win - 1));
    frame[i] = (w.samples(t * hop + i) - cfg.pre_emphasis * prev) * hamming;
  }
  Eigen::MatrixXd fb = MelFilterbank(cfg.num_mel_filters, nfft, sr,
                                     cfg.low_freq_hz, cfg.high_freq_hz);
  for (int m = 0; m < cfg.num_mel_filters; ++m) {
    double energy = 0.0;
    for (int k = 0; k <= nfft / 2; ++k) {
      if (fb(m, k) == 0.0) continue;
      double re = 0.0, im = 0.0;
      for (int i = 0; i < win; ++i) {
        re += frame[i] * std::cos(2.0 * M_PI * k * i / nfft);
        im -= frame[i] * std::sin(2.0 * M_PI * k * i / nfft);
      }
      energy += fb(m, k) * (re * re + im * im);
    }
    double expect = std::log(std::max(energy, 1e-10));
    CHECK(logmel(t, m) == doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("mfcc of hop-shifted signal is a row-shifted mfcc") {
  Rng rng(9);
  Waveform w;
  w.samples.resize(8000);
  for (int i = 0; i < 8000; ++i) w.samples(i) = rng.Normal(0.0, 0.1);
  Waveform shifted;
  shifted.samples = Eigen::VectorXd::Zero(8160);
  shifted.samples.tail(8000) = w.samples;

  auto a = ComputeMfcc(w, MfccConfig{});
  auto b = ComputeMfcc(shifted, MfccConfig{});
  REQUIRE(b.NumFrames() == a.NumFrames() + 1);
  // frame t of the original equals frame t+1 of the shifted signal,
  // excluding the first shifted frame (edge effect of pre-emphasis)
  for (int t = 1; t < a.NumFrames(); ++t)
    for (int f = 0; f < a.Dim(); ++f)
      CHECK(a.values(t, f) == doctest::Approx(b.values(t + 1, f)).epsilon(1e-9));
}

TEST_CASE("cmvn zeroes constant columns and normalizes moments") {
  Rng rng(21);
  FeatureMatrix feat;
  feat.values.resize(50, 4);
  for (int t = 0; t < 50; ++t) {
    feat.values(t, 0) = 7.5;  // constant column
    for (int f = 1; f < 4; ++f) feat.values(t, f) = rng.Normal(3.0, 2.0);
  }
  auto out = Cmvn(feat);
  for (int t = 0; t < 50; ++t) CHECK(out.values(t, 0) == doctest::Approx(0.0));
  for (int f = 0; f < 4; ++f) {
    double mean = out.values.col(f).mean();
    CHECK(std::abs(mean) < 1e-9);
  }
  for (int f = 1; f < 4; ++f) {
    double var = out.values.col(f).squaredNorm() / 50.0;
    CHECK(var == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("cmvn is idempotent") {
  Rng rng(22);
  FeatureMatrix feat;
  feat.values.resize(30, 5);
  for (int t = 0; t < 30; ++t)
    for (int f = 0; f < 5; ++f) feat.values(t, f) = rng.Normal(-1.0, 4.0);
  auto once = Cmvn(feat);
  auto twice = Cmvn(once);
  CHECK((once.values - twice.values).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("cmvn with one frame removes the mean only") {
  FeatureMatrix feat;
  feat.values.resize(1, 3);
  feat.values << 1.0, -2.0, 5.0;
  auto out = Cmvn(feat);
  CHECK(out.values.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("energy vad on silence and tone") {
  FrameClock clock(100.0);
  Waveform silence;
  silence.samples = Eigen::VectorXd::Zero(16000);
  auto mask0 = EnergyVad(silence, clock);
  CHECK(mask0.sum() == 0);

  auto tone = Sine(440.0, 1.0, 0.5);
  auto mask1 = EnergyVad(tone, clock);
  CHECK(mask1.minCoeff() == 1);
}
