// tsdiar/cluster/cluster.cc

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

#include "tsdiar/cluster/cluster.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <limits>
#include <numeric>

#include "tsdiar/util/common.h"
#include "tsdiar/util/rng.h"

namespace tsdiar {

std::vector<SubSegment> MakeSubSegments(const Eigen::VectorXi &vad_mask,
                                        const FrameClock &clock,
                                        const SubSegmentConfig &cfg) {
  std::vector<SubSegment> spans;
  const int n = static_cast<int>(vad_mask.size());
  int region_start = -1;
  for (int t = 0; t <= n; ++t) {
    bool speech = t < n && vad_mask(t) != 0;
    if (speech && region_start < 0) region_start = t;
    if (!speech && region_start >= 0) {
      double a = clock.FrameStart(region_start);
      double b = clock.FrameStart(t);
      for (double pos = a; pos < b - kTimeEps; pos += cfg.shift_sec) {
        double len = std::min(cfg.window_sec, b - pos);
        if (len >= cfg.min_tail_sec - kTimeEps)
          spans.push_back({pos, len, {}});
      }
      region_start = -1;
    }
  }
  return spans;
}

Eigen::MatrixXd CosineMatrix(const std::vector<Eigen::VectorXd> &embeddings) {
  const int n = static_cast<int>(embeddings.size());
  Eigen::MatrixXd sim(n, n);
  std::vector<Eigen::VectorXd> unit(n);
  for (int i = 0; i < n; ++i) {
    double norm = embeddings[i].norm();
    Require(norm > 0.0,
            "CosineMatrix: zero embedding at index " + std::to_string(i));
    unit[i] = embeddings[i] / norm;
  }
  for (int i = 0; i < n; ++i) {
    sim(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      double v = unit[i].dot(unit[j]);
      sim(i, j) = v;
      sim(j, i) = v;
    }
  }
  return sim;
}

namespace {

Eigen::MatrixXd NormalizedLaplacian(const Eigen::MatrixXd &affinity) {
  Eigen::VectorXd deg = affinity.rowwise().sum();
  Eigen::VectorXd inv_sqrt =
      (deg.array() > 0.0).select(deg.array().rsqrt(), 0.0);
  Eigen::MatrixXd l = -(inv_sqrt.asDiagonal() * affinity * inv_sqrt.asDiagonal());
  l.diagonal().array() += 1.0;
  return l;
}

Eigen::MatrixXd TopQAffinity(const Eigen::MatrixXd &sim, int q) {
  const int n = static_cast<int>(sim.rows());
  Eigen::MatrixXd binary = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), 0);
    // top-q by similarity, diagonal excluded, ties to the smaller index
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (sim(i, a) != sim(i, b)) return sim(i, a) > sim(i, b);
      return a < b;
    });
    int taken = 0;
    for (int j : order) {
      if (j == i) continue;
      binary(i, j) = 1.0;
      if (++taken == q) break;
    }
  }
  binary = binary.cwiseMax(binary.transpose().eval());
  for (int i = 0; i < n; ++i)
    if (binary.row(i).sum() == 0.0) binary(i, i) = 1.0;
  return binary;
}

}  // namespace

Eigen::MatrixXd BinarizeAuto(const Eigen::MatrixXd &similarity, int k,
                             std::vector<double> *gap_by_q) {
  const int n = static_cast<int>(similarity.rows());
  Require(n > k, "BinarizeAuto: need more items than clusters");

  // Candidate neighborhood sizes. Small problems get the exhaustive scan;
  // larger ones also stride the upper range, where the eigengap is flat.
  const int q_max = (n + 1) / 2;
  std::vector<int> candidates;
  for (int q = 1; q <= std::min(q_max, 64); ++q) candidates.push_back(q);
  for (int q = 64 + 8; q <= q_max; q += 8) candidates.push_back(q);

  double best_gap = -1.0;
  int best_q = candidates.front();
  Eigen::MatrixXd best_affinity;
  if (gap_by_q != nullptr) gap_by_q->assign(q_max + 1, 0.0);
  for (int q : candidates) {
    Eigen::MatrixXd affinity = TopQAffinity(similarity, q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        NormalizedLaplacian(affinity), Eigen::EigenvaluesOnly);
    RequireNumeric(solver.info() == Eigen::Success,
                   "BinarizeAuto: eigensolver failed");
    const auto &ev = solver.eigenvalues();
    double gap = ev(k) - ev(k - 1);
    if (gap_by_q != nullptr) (*gap_by_q)[q] = gap;
    if (gap > best_gap) {
      best_gap = gap;
      best_q = q;
      best_affinity = std::move(affinity);
    }
  }
  (void)best_q;
  return best_affinity;
}

namespace {

struct KmeansResult {
  std::vector<int> labels;
  double inertia = std::numeric_limits<double>::infinity();
};

KmeansResult KmeansOnce(const Eigen::MatrixXd &rows, int k, Rng *rng) {
  const int n = static_cast<int>(rows.rows());
  Eigen::MatrixXd centers(k, rows.cols());
  // k-means++ seeding
  centers.row(0) = rows.row(rng->UniformInt(n));
  Eigen::VectorXd dist2 =
      (rows.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int i = 1; i < k; ++i) {
    double total = dist2.sum();
    int pick;
    if (total > 0.0) {
      double u = rng->Uniform() * total, acc = 0.0;
      for (pick = 0; pick < n - 1; ++pick) {
        acc += dist2(pick);
        if (acc >= u) break;
      }
    } else {
      pick = rng->UniformInt(n);
    }
    centers.row(i) = rows.row(pick);
    dist2 = dist2.cwiseMin(
        (rows.rowwise() - centers.row(i)).rowwise().squaredNorm());
  }

  KmeansResult result;
  result.labels.assign(n, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (int t = 0; t < n; ++t) {
      double best = std::numeric_limits<double>::infinity();
      int arg = 0;
      for (int i = 0; i < k; ++i) {
        double d = (rows.row(t) - centers.row(i)).squaredNorm();
        if (d < best) {
          best = d;
          arg = i;
        }
      }
      if (arg != result.labels[t]) {
        result.labels[t] = arg;
        changed = true;
      }
    }
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, rows.cols());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (int t = 0; t < n; ++t) {
      sums.row(result.labels[t]) += rows.row(t);
      counts(result.labels[t]) += 1.0;
    }
    for (int i = 0; i < k; ++i)
      if (counts(i) > 0) centers.row(i) = sums.row(i) / counts(i);
    if (!changed && iter > 0) break;
  }
  result.inertia = 0.0;
  for (int t = 0; t < n; ++t)
    result.inertia += (rows.row(t) - centers.row(result.labels[t])).squaredNorm();
  return result;
}

}  // namespace

std::vector<int> SpectralCluster(const Eigen::MatrixXd &affinity, int k,
                                 std::uint64_t seed) {
  const int n = static_cast<int>(affinity.rows());
  Require(n >= k, "SpectralCluster: fewer items than clusters");
  Require(affinity.isApprox(affinity.transpose(), 1e-10),
          "SpectralCluster: affinity must be symmetric");
  Require(affinity.minCoeff() >= 0.0,
          "SpectralCluster: affinity must be non-negative");
  if (k == 1) return std::vector<int>(n, 0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      NormalizedLaplacian(affinity));
  RequireNumeric(solver.info() == Eigen::Success,
                 "SpectralCluster: eigensolver failed");
  Eigen::MatrixXd rows = solver.eigenvectors().leftCols(k);
  for (int i = 0; i < n; ++i) {
    double norm = rows.row(i).norm();
    if (norm > 0.0) rows.row(i) /= norm;
  }

  Rng rng(seed);
  KmeansResult best;
  for (int restart = 0; restart < 50; ++restart) {
    KmeansResult r = KmeansOnce(rows, k, &rng);
    if (r.inertia < best.inertia) best = std::move(r);
  }
  return best.labels;
}

std::vector<int> Ahc(const std::vector<Eigen::VectorXd> &embeddings, int k) {
  const int n = static_cast<int>(embeddings.size());
  Require(n >= k, "Ahc: fewer items than clusters");
  Eigen::MatrixXd dist = (1.0 - CosineMatrix(embeddings).array()).matrix();

  std::vector<int> size(n, 1), parent(n, -1);
  std::vector<bool> active(n, true);
  int num_clusters = n;
  while (num_clusters > k) {
    double best = std::numeric_limits<double>::infinity();
    int bi = -1, bj = -1;
    for (int i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        if (dist(i, j) < best) {
          best = dist(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    // average linkage: d(i+j, m) = (|i| d(i,m) + |j| d(j,m)) / (|i|+|j|)
    for (int m = 0; m < n; ++m) {
      if (!active[m] || m == bi || m == bj) continue;
      double d = (size[bi] * dist(bi, m) + size[bj] * dist(bj, m)) /
                 (size[bi] + size[bj]);
      dist(bi, m) = d;
      dist(m, bi) = d;
    }
    size[bi] += size[bj];
    active[bj] = false;
    parent[bj] = bi;
    --num_clusters;
  }

  std::vector<int> root(n);
  for (int i = 0; i < n; ++i) {
    int r = i;
    while (parent[r] >= 0) r = parent[r];
    root[i] = r;
  }
  // compact labels in order of first appearance
  std::vector<int> labels(n, -1), remap(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    if (remap[root[i]] < 0) remap[root[i]] = next++;
    labels[i] = remap[root[i]];
  }
  return labels;
}

Segmentation LabelsToSegmentation(const std::vector<SubSegment> &spans,
                                  const std::vector<int> &labels,
                                  const std::string &file_id) {
  Require(spans.size() == labels.size(),
          "LabelsToSegmentation: one label per span required");
  Segmentation seg(file_id);
  for (std::size_t i = 0; i < spans.size(); ++i)
    seg.segments.emplace_back("spk" + std::to_string(labels[i]),
                              spans[i].onset, spans[i].duration);
  return Normalize(seg);
}

}  // namespace tsdiar
