// tsdiar/score/score.cc

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

#include "tsdiar/score/score.h"

#include <algorithm>
#include <iostream>
#include <limits>

namespace tsdiar {

namespace {

// Frame-rasterized views of ref and hyp on a shared grid, restricted to the
// UEM. Column order follows Segmentation::Speakers().
struct Raster {
  std::vector<std::string> ref_speakers, hyp_speakers;
  Eigen::MatrixXi ref, hyp;          // T x |speakers|
  std::vector<char> scored;          // per-frame UEM membership
  int num_frames = 0;
  double frame_dur = 0.0;
};

Eigen::MatrixXi PadRows(const Eigen::MatrixXi &m, int rows) {
  if (m.rows() == rows) return m;
  Eigen::MatrixXi out = Eigen::MatrixXi::Zero(rows, m.cols());
  out.topRows(m.rows()) = m;
  return out;
}

Raster Rasterize(const Segmentation &ref, const Segmentation &hyp,
                 const UemMask &uem, const FrameClock &clock) {
  Raster r;
  r.ref_speakers = ref.Speakers();
  r.hyp_speakers = hyp.Speakers();
  double end = std::max(ref.MaxEndTime(), hyp.MaxEndTime());
  r.num_frames = clock.NumFramesCovering(end);
  r.frame_dur = clock.FrameDuration();
  r.ref = PadRows(SegmentationToFrames(ref, clock, r.ref_speakers),
                  r.num_frames);
  r.hyp = PadRows(SegmentationToFrames(hyp, clock, r.hyp_speakers),
                  r.num_frames);
  r.scored.assign(r.num_frames, 1);
  if (uem.HasFile(ref.file_id)) {
    for (int t = 0; t < r.num_frames; ++t)
      r.scored[t] = uem.Contains(ref.file_id, clock.FrameMidpoint(t)) ? 1 : 0;
  }
  return r;
}

}  // namespace

std::vector<int> MaxWeightAssignment(const Eigen::MatrixXd &weights) {
  // Potential-based Hungarian algorithm on the cost matrix
  // c = max(weights) - weights, padded square.
  int rows = static_cast<int>(weights.rows());
  int cols = static_cast<int>(weights.cols());
  int n = std::max(rows, cols);
  if (n == 0) return {};
  double wmax = 0.0;
  if (weights.size() > 0) wmax = std::max(0.0, weights.maxCoeff());
  Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(n, n, wmax);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) cost(i, j) = wmax - weights(i, j);

  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> assignment(rows, -1);
  for (int j = 1; j <= n; ++j) {
    int i = p[j];
    if (i >= 1 && i <= rows && j <= cols) assignment[i - 1] = j - 1;
  }
  return assignment;
}

SpeakerMap OptimalMapping(const Segmentation &ref, const Segmentation &hyp,
                          const UemMask &uem) {
  FrameClock clock(100.0);
  Raster r = Rasterize(ref, hyp, uem, clock);
  int nh = static_cast<int>(r.hyp_speakers.size());
  int nr = static_cast<int>(r.ref_speakers.size());
  if (nh == 0 || nr == 0) return {};

  Eigen::MatrixXd overlap = Eigen::MatrixXd::Zero(nh, nr);
  for (int t = 0; t < r.num_frames; ++t) {
    if (!r.scored[t]) continue;
    for (int h = 0; h < nh; ++h) {
      if (!r.hyp(t, h)) continue;
      for (int j = 0; j < nr; ++j)
        if (r.ref(t, j)) overlap(h, j) += r.frame_dur;
    }
  }

  std::vector<int> assignment = MaxWeightAssignment(overlap);
  SpeakerMap map;
  for (int h = 0; h < nh; ++h) {
    int j = assignment[h];
    if (j >= 0 && overlap(h, j) > 0.0)
      map[r.hyp_speakers[h]] = r.ref_speakers[j];
  }
  return map;
}

DerBreakdown ComputeDer(const Segmentation &ref, const Segmentation &hyp,
                        const UemMask &uem, const FrameClock &clock) {
  Raster r = Rasterize(ref, hyp, uem, clock);
  SpeakerMap map = OptimalMapping(ref, hyp, uem);

  // matched_cols[h] = ref column mapped to hyp column h, else -1.
  std::vector<int> matched_cols(r.hyp_speakers.size(), -1);
  for (std::size_t h = 0; h < r.hyp_speakers.size(); ++h) {
    auto it = map.find(r.hyp_speakers[h]);
    if (it == map.end()) continue;
    auto pos = std::find(r.ref_speakers.begin(), r.ref_speakers.end(),
                         it->second);
    matched_cols[h] = static_cast<int>(pos - r.ref_speakers.begin());
  }

  DerBreakdown out;
  long miss = 0, fa = 0, conf = 0, total = 0;
  for (int t = 0; t < r.num_frames; ++t) {
    if (!r.scored[t]) continue;
    int nref = r.ref.cols() ? r.ref.row(t).sum() : 0;
    int nhyp = r.hyp.cols() ? r.hyp.row(t).sum() : 0;
    int matched = 0;
    for (std::size_t h = 0; h < r.hyp_speakers.size(); ++h)
      if (r.hyp(t, static_cast<int>(h)) && matched_cols[h] >= 0 &&
          r.ref(t, matched_cols[h]))
        ++matched;
    miss += std::max(0, nref - nhyp);
    fa += std::max(0, nhyp - nref);
    conf += std::min(nref, nhyp) - matched;
    total += nref;
  }
  Require(total > 0, "ComputeDer: empty reference");
  out.miss = miss * r.frame_dur;
  out.false_alarm = fa * r.frame_dur;
  out.confusion = conf * r.frame_dur;
  out.total = total * r.frame_dur;
  return out;
}

JerBreakdown ComputeJer(const Segmentation &ref, const Segmentation &hyp,
                        const UemMask &uem, const FrameClock &clock) {
  Raster r = Rasterize(ref, hyp, uem, clock);
  long total = 0;
  for (int t = 0; t < r.num_frames; ++t)
    if (r.scored[t] && r.ref.cols() > 0) total += r.ref.row(t).sum();
  Require(total > 0, "ComputeJer: empty reference");

  SpeakerMap map = OptimalMapping(ref, hyp, uem);
  // Reverse the injective map: ref speaker -> hyp column.
  std::map<std::string, int> hyp_col_of_ref;
  for (std::size_t h = 0; h < r.hyp_speakers.size(); ++h) {
    auto it = map.find(r.hyp_speakers[h]);
    if (it != map.end()) hyp_col_of_ref[it->second] = static_cast<int>(h);
  }

  JerBreakdown out;
  double sum = 0.0;
  for (std::size_t j = 0; j < r.ref_speakers.size(); ++j) {
    auto it = hyp_col_of_ref.find(r.ref_speakers[j]);
    int h = (it == hyp_col_of_ref.end()) ? -1 : it->second;
    long inter = 0, uni = 0;
    for (int t = 0; t < r.num_frames; ++t) {
      if (!r.scored[t]) continue;
      bool in_ref = r.ref(t, static_cast<int>(j)) != 0;
      bool in_hyp = h >= 0 && r.hyp(t, h) != 0;
      if (in_ref && in_hyp) ++inter;
      if (in_ref || in_hyp) ++uni;
    }
    double jer_r = (uni == 0) ? 0.0 : 1.0 - static_cast<double>(inter) / uni;
    out.per_speaker.emplace_back(r.ref_speakers[j], jer_r);
    sum += jer_r;
  }
  out.jer = out.per_speaker.empty() ? 0.0 : sum / out.per_speaker.size();
  return out;
}

CorpusScore ScoreCorpus(const std::map<std::string, Segmentation> &ref,
                        const std::map<std::string, Segmentation> &hyp,
                        const UemMask &uem, const FrameClock &clock) {
  CorpusScore out;
  for (const auto &[file_id, h] : hyp)
    if (ref.find(file_id) == ref.end())
      std::cerr << "ScoreCorpus: hypothesis file '" << file_id
                << "' absent from reference, ignored\n";

  double jer_sum = 0.0;
  int jer_count = 0;
  for (const auto &[file_id, r] : ref) {
    Segmentation h(file_id);
    auto it = hyp.find(file_id);
    if (it != hyp.end()) h = it->second;
    DerBreakdown d = ComputeDer(r, h, uem, clock);
    JerBreakdown j = ComputeJer(r, h, uem, clock);
    out.der.miss += d.miss;
    out.der.false_alarm += d.false_alarm;
    out.der.confusion += d.confusion;
    out.der.total += d.total;
    out.per_file_der[file_id] = d;
    out.per_file_jer[file_id] = j;
    for (const auto &[spk, v] : j.per_speaker) {
      jer_sum += v;
      ++jer_count;
    }
  }
  Require(out.der.total > 0, "ScoreCorpus: empty reference");
  out.jer = jer_count ? jer_sum / jer_count : 0.0;
  return out;
}

double SingleSpeakerCollapseBound(const Segmentation &seg) {
  Segmentation norm = Normalize(seg);
  if (norm.Empty()) return 0.0;
  // Event sweep over per-speaker activity counts.
  std::vector<std::pair<double, int>> events;
  events.reserve(norm.segments.size() * 2);
  for (const auto &s : norm.segments) {
    events.emplace_back(s.onset, +1);
    events.emplace_back(s.End(), -1);
  }
  std::sort(events.begin(), events.end());
  double excess = 0.0, prev_t = events.front().first;
  int k = 0;
  for (const auto &[t, delta] : events) {
    if (t > prev_t && k >= 2) excess += (k - 1) * (t - prev_t);
    prev_t = t;
    k += delta;
  }
  double total = norm.TotalSpeakerTime();
  return total > 0.0 ? excess / total : 0.0;
}

}  // namespace tsdiar
