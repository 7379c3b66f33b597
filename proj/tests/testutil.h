// tests/testutil.h
//
// Shared helpers and independent reference oracles used across the test
// suites. Everything here is deliberately written the slow, obvious way so
// it stays independent of the library implementation paths it checks.

#ifndef TSDIAR_TESTS_TESTUTIL_H_
#define TSDIAR_TESTS_TESTUTIL_H_

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tsdiar/core/segmentation.h"
#include "tsdiar/core/uem.h"
#include "tsdiar/util/rng.h"

namespace tsdiar::test {

// Random segmentation with up to `max_speakers` speakers named spk0..,
// segment times on a 10 ms-friendly grid unless `grid` is 0 (continuous).
inline Segmentation RandomSegmentation(Rng *rng, int max_segments,
                                       int max_speakers, double max_time,
                                       double grid = 0.01,
                                       const std::string &file_id = "f") {
  Segmentation seg(file_id);
  int n = 1 + rng->UniformInt(max_segments);
  for (int i = 0; i < n; ++i) {
    std::string spk = "spk" + std::to_string(rng->UniformInt(max_speakers));
    double onset = rng->Uniform(0.0, max_time * 0.9);
    double dur = rng->Uniform(0.02, max_time * 0.25);
    if (grid > 0.0) {
      onset = std::round(onset / grid) * grid;
      dur = std::max(grid, std::round(dur / grid) * grid);
    }
    seg.segments.emplace_back(spk, onset, dur);
  }
  return seg;
}

// 1 ms rasterization of one speaker's support over [0, dur).
inline std::vector<char> RasterizeSpeaker1ms(const Segmentation &seg,
                                             const std::string &spk,
                                             double dur) {
  int n = static_cast<int>(std::ceil(dur * 1000.0));
  std::vector<char> mask(n, 0);
  for (const auto &s : seg.segments) {
    if (s.speaker != spk) continue;
    for (int t = 0; t < n; ++t) {
      double mid = (t + 0.5) / 1000.0;
      if (mid >= s.onset && mid < s.End()) mask[t] = 1;
    }
  }
  return mask;
}

// Independent 1 ms-resolution DER scorer: exhaustive speaker mapping
// (<= 6 speakers a side), direct per-frame counting. Used as the second
// implementation the main scorer is checked against.
struct SlowDer {
  double miss = 0, fa = 0, conf = 0, total = 0;
  double Der() const { return (miss + fa + conf) / total; }
};

inline SlowDer SlowScoreDer(const Segmentation &ref, const Segmentation &hyp,
                            const UemMask &uem = {}) {
  double end = std::max(ref.MaxEndTime(), hyp.MaxEndTime());
  int n = static_cast<int>(std::ceil(end * 1000.0));
  auto ref_spk = ref.Speakers();
  auto hyp_spk = hyp.Speakers();
  std::vector<std::vector<char>> rmask, hmask;
  for (const auto &s : ref_spk) rmask.push_back(RasterizeSpeaker1ms(ref, s, end));
  for (const auto &s : hyp_spk) hmask.push_back(RasterizeSpeaker1ms(hyp, s, end));

  std::vector<char> scored(n, 1);
  if (uem.HasFile(ref.file_id))
    for (int t = 0; t < n; ++t)
      scored[t] = uem.Contains(ref.file_id, (t + 0.5) / 1000.0) ? 1 : 0;

  // Overlap matrix, then exhaustive search over injective hyp->ref maps.
  int nh = static_cast<int>(hyp_spk.size()), nr = static_cast<int>(ref_spk.size());
  std::vector<std::vector<double>> overlap(nh, std::vector<double>(nr, 0.0));
  for (int t = 0; t < n; ++t) {
    if (!scored[t]) continue;
    for (int h = 0; h < nh; ++h)
      if (hmask[h][t])
        for (int r = 0; r < nr; ++r)
          if (rmask[r][t]) overlap[h][r] += 1e-3;
  }
  std::vector<int> best(nh, -1), cur(nh, -1);
  double best_val = -1.0;
  std::vector<char> used(nr, 0);
  // Depth-first over all injective partial assignments.
  auto dfs = [&](auto &&self, int h, double val) -> void {
    if (h == nh) {
      if (val > best_val) {
        best_val = val;
        best = cur;
      }
      return;
    }
    self(self, h + 1, val);  // h unmapped
    for (int r = 0; r < nr; ++r) {
      if (used[r]) continue;
      used[r] = 1;
      cur[h] = r;
      self(self, h + 1, val + overlap[h][r]);
      cur[h] = -1;
      used[r] = 0;
    }
  };
  dfs(dfs, 0, 0.0);
  for (int h = 0; h < nh; ++h)
    if (best[h] >= 0 && overlap[h][best[h]] <= 0.0) best[h] = -1;

  SlowDer out;
  long miss = 0, fa = 0, conf = 0, total = 0;
  for (int t = 0; t < n; ++t) {
    if (!scored[t]) continue;
    int nref = 0, nhyp = 0, matched = 0;
    for (int r = 0; r < nr; ++r) nref += rmask[r][t];
    for (int h = 0; h < nh; ++h) nhyp += hmask[h][t];
    for (int h = 0; h < nh; ++h)
      if (hmask[h][t] && best[h] >= 0 && rmask[best[h]][t]) ++matched;
    miss += std::max(0, nref - nhyp);
    fa += std::max(0, nhyp - nref);
    conf += std::min(nref, nhyp) - matched;
    total += nref;
  }
  out.miss = miss * 1e-3;
  out.fa = fa * 1e-3;
  out.conf = conf * 1e-3;
  out.total = total * 1e-3;
  return out;
}

}  // namespace tsdiar::test

#endif  // TSDIAR_TESTS_TESTUTIL_H_
