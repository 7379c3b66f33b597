// tests/test_ivec.cc

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

#include "testutil.h"
#include "tsdiar/ivec/gmm.h"
#include "tsdiar/ivec/ivector.h"

using namespace tsdiar;

namespace {

Eigen::MatrixXd GaussianBlob(Rng *rng, int n, const Eigen::VectorXd &mean,
                             double stddev) {
  Eigen::MatrixXd x(n, mean.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < mean.size(); ++j)
      x(i, j) = mean(j) + stddev * rng->Normal();
  return x;
}

// Draws one utterance from a known total-variability model and returns its
// frames; used for generative-recovery oracles.
Eigen::MatrixXd DrawFromModel(Rng *rng, const GmmUbm &ubm,
                              const Eigen::MatrixXd &t_true,
                              const Eigen::VectorXd &w, int num_frames) {
  const int f = ubm.Dim();
  Eigen::MatrixXd frames(num_frames, f);
  for (int i = 0; i < num_frames; ++i) {
    double u = rng->Uniform();
    int c = 0;
    double acc = 0.0;
    for (; c < ubm.NumComponents(); ++c) {
      acc += ubm.weights(c);
      if (u < acc) break;
    }
    c = std::min(c, ubm.NumComponents() - 1);
    Eigen::VectorXd shift = t_true.block(c * f, 0, f, t_true.cols()) * w;
    for (int j = 0; j < f; ++j)
      frames(i, j) = ubm.means(c, j) + shift(j) +
                     std::sqrt(ubm.vars(c, j)) * rng->Normal();
  }
  return frames;
}

GmmUbm MakeTestUbm(Rng *rng, int c, int f) {
  GmmUbm ubm;
  ubm.weights = Eigen::VectorXd::Constant(c, 1.0 / c);
  ubm.means.resize(c, f);
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < f; ++j) ubm.means(i, j) = 4.0 * rng->Normal();
  ubm.vars = Eigen::MatrixXd::Constant(c, f, 1.0);
  return ubm;
}

}  // namespace

TEST_CASE("single-component ubm equals sample moments") {
  Rng rng(2);
  Eigen::MatrixXd x = GaussianBlob(&rng, 500, Eigen::Vector3d(1.0, -2.0, 0.5), 1.7);
  auto ubm = TrainUbm(x, 1, 3, 42);
  Eigen::RowVectorXd mean = x.colwise().mean();
  Eigen::RowVectorXd var =
      (x.rowwise() - mean).array().square().colwise().sum() / x.rows();
  CHECK((ubm.means.row(0) - mean).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((ubm.vars.row(0) - var).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(ubm.weights(0) == doctest::Approx(1.0));
}

TEST_CASE("ubm recovers a separated two-gaussian mixture") {
  Rng rng(3);
  Eigen::VectorXd m1 = Eigen::Vector2d(0.0, 0.0);
  Eigen::VectorXd m2 = Eigen::Vector2d(5.0, 5.0);
  Eigen::MatrixXd x(2000, 2);
  x.topRows(1000) = GaussianBlob(&rng, 1000, m1, 0.5);
  x.bottomRows(1000) = GaussianBlob(&rng, 1000, m2, 0.5);
  auto ubm = TrainUbm(x, 2, 20, 7);
  // match components to truth
  double d11 = (ubm.means.row(0).transpose() - m1).norm() +
               (ubm.means.row(1).transpose() - m2).norm();
  double d12 = (ubm.means.row(0).transpose() - m2).norm() +
               (ubm.means.row(1).transpose() - m1).norm();
  CHECK(std::min(d11, d12) / 2.0 < 0.1);
}

TEST_CASE("ubm log-likelihood trace is non-decreasing") {
  Rng rng(4);
  Eigen::MatrixXd x(600, 3);
  for (int i = 0; i < 600; ++i)
    for (int j = 0; j < 3; ++j) x(i, j) = rng.Uniform(-3.0, 3.0);
  std::vector<double> trace;
  TrainUbm(x, 4, 20, 11, &trace);
  REQUIRE(trace.size() == 20);
  for (std::size_t i = 1; i < trace.size(); ++i)
    CHECK(trace[i] >= trace[i - 1] - 1e-8 * std::abs(trace[i - 1]));
}

TEST_CASE("posterior rows sum to one") {
  Rng rng(5);
  auto ubm = MakeTestUbm(&rng, 8, 4);
  Eigen::MatrixXd x = GaussianBlob(&rng, 100, Eigen::VectorXd::Zero(4), 3.0);
  auto post = ubm.Posteriors(x);
  for (int t = 0; t < 100; ++t)
    CHECK(post.row(t).sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("zero weights give zero stats; unit weights equal hard stats") {
  Rng rng(6);
  auto ubm = MakeTestUbm(&rng, 4, 3);
  Eigen::MatrixXd x = GaussianBlob(&rng, 60, Eigen::VectorXd::Zero(3), 2.0);

  auto zero = AccumulateStats(x, ubm, Eigen::VectorXd::Zero(60));
  CHECK(zero.zeroth.cwiseAbs().maxCoeff() == 0.0);
  CHECK(zero.first.cwiseAbs().maxCoeff() == 0.0);

  auto hard = AccumulateStats(x, ubm);
  auto ones = AccumulateStats(x, ubm, Eigen::VectorXd::Ones(60));
  CHECK((hard.zeroth - ones.zeroth).cwiseAbs().maxCoeff() == 0.0);
  CHECK((hard.first - ones.first).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("weighted stats match the frame-replication approximation") {
  Rng rng(7);
  auto ubm = MakeTestUbm(&rng, 3, 2);
  Eigen::MatrixXd x = GaussianBlob(&rng, 40, Eigen::VectorXd::Zero(2), 2.0);
  Eigen::VectorXd w(40);
  for (int i = 0; i < 40; ++i) w(i) = rng.Uniform();

  // replicate frame t floor(1000 w_t) times; the soft path gets the same
  // rational weights
  std::vector<int> reps(40);
  Eigen::VectorXd quantized(40);
  int total = 0;
  for (int i = 0; i < 40; ++i) {
    reps[i] = static_cast<int>(std::floor(1000.0 * w(i)));
    quantized(i) = reps[i] / 1000.0;
    total += reps[i];
  }
  Eigen::MatrixXd replicated(total, 2);
  int r = 0;
  for (int i = 0; i < 40; ++i)
    for (int k = 0; k < reps[i]; ++k) replicated.row(r++) = x.row(i);
  auto rep_stats = AccumulateStats(replicated, ubm);
  rep_stats.zeroth /= 1000.0;
  rep_stats.first /= 1000.0;

  auto soft = AccumulateStats(x, ubm, quantized);
  CHECK((soft.zeroth - rep_stats.zeroth).cwiseAbs().maxCoeff() < 1e-3);
  CHECK((soft.first - rep_stats.first).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("stats are linear in the frame weights and mergeable") {
  Rng rng(8);
  auto ubm = MakeTestUbm(&rng, 4, 3);
  Eigen::MatrixXd x = GaussianBlob(&rng, 50, Eigen::VectorXd::Zero(3), 2.0);
  Eigen::VectorXd w1(50), w2(50);
  for (int i = 0; i < 50; ++i) {
    w1(i) = rng.Uniform();
    w2(i) = rng.Uniform() * 0.5;
  }
  auto a = AccumulateStats(x, ubm, w1);
  auto b = AccumulateStats(x, ubm, w2);
  auto sum = AccumulateStats(x, ubm, w1 + w2);
  CHECK((a.zeroth + b.zeroth - sum.zeroth).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((a.first + b.first - sum.first).cwiseAbs().maxCoeff() < 1e-9);

  BaumWelchStats merged(4, 3);
  merged += a;
  merged += b;
  BaumWelchStats merged_rev(4, 3);
  merged_rev += b;
  merged_rev += a;
  CHECK((merged.zeroth - merged_rev.zeroth).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((merged.first - merged_rev.first).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("scalar ivector formula") {
  GmmUbm ubm;
  ubm.weights = Eigen::VectorXd::Ones(1);
  ubm.means = Eigen::MatrixXd::Zero(1, 1);
  ubm.vars = Eigen::MatrixXd::Ones(1, 1);
  TMatrix tmat;
  tmat.feat_dim = 1;
  tmat.t = Eigen::MatrixXd::Ones(1, 1);
  BaumWelchStats stats(1, 1);
  stats.zeroth(0) = 4.0;
  stats.first(0, 0) = 3.2;
  auto w = ExtractIvector(stats, ubm, tmat);
  CHECK(w(0) == doctest::Approx(3.2 / 5.0));
}

TEST_CASE("zero stats give the prior-mean zero ivector") {
  Rng rng(9);
  auto ubm = MakeTestUbm(&rng, 4, 3);
  TMatrix tmat;
  tmat.feat_dim = 3;
  tmat.t.resize(12, 2);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 2; ++j) tmat.t(i, j) = rng.Normal();
  BaumWelchStats stats(4, 3);
  auto w = ExtractIvector(stats, ubm, tmat);
  CHECK(w.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("ivector shrinks to zero as counts vanish, to ls as they grow") {
  // scalar case: w = F / (1/T^2... ) handled through N scaling
  GmmUbm ubm;
  ubm.weights = Eigen::VectorXd::Ones(1);
  ubm.means = Eigen::MatrixXd::Zero(1, 1);
  ubm.vars = Eigen::MatrixXd::Ones(1, 1);
  TMatrix tmat;
  tmat.feat_dim = 1;
  tmat.t = Eigen::MatrixXd::Constant(1, 1, 2.0);
  // mean offset per frame is 1.0, so the least-squares latent is 0.5
  for (double n : {1e-6, 1.0, 100.0, 1e6}) {
    BaumWelchStats stats(1, 1);
    stats.zeroth(0) = n;
    stats.first(0, 0) = n * 1.0;
    double w = ExtractIvector(stats, ubm, tmat)(0);
    if (n < 1e-3) CHECK(std::abs(w) < 1e-5);
    if (n > 1e5) CHECK(w == doctest::Approx(0.5).epsilon(1e-4));
  }
}

TEST_CASE("tmatrix training recovers the generating subspace") {
  Rng rng(10);
  const int c = 8, f = 10, d = 4;
  auto ubm = MakeTestUbm(&rng, c, f);
  Eigen::MatrixXd t_true(c * f, d);
  for (int i = 0; i < c * f; ++i)
    for (int j = 0; j < d; ++j) t_true(i, j) = rng.Normal();

  std::vector<BaumWelchStats> stats;
  for (int u = 0; u < 200; ++u) {
    Eigen::VectorXd w(d);
    for (int j = 0; j < d; ++j) w(j) = rng.Normal();
    auto frames = DrawFromModel(&rng, ubm, t_true, w, 200);
    stats.push_back(AccumulateStats(frames, ubm));
  }
  std::vector<double> evidence;
  auto tmat = TrainTMatrix(stats, ubm, d, 10, 123, &evidence);

  // evidence is non-decreasing
  for (std::size_t i = 1; i < evidence.size(); ++i)
    CHECK(evidence[i] >= evidence[i - 1] - 1e-6 * std::abs(evidence[i - 1]));

  // principal angle between recovered and true subspaces below 15 degrees
  Eigen::HouseholderQR<Eigen::MatrixXd> qa(t_true), qb(tmat.t);
  Eigen::MatrixXd ua = qa.householderQ() * Eigen::MatrixXd::Identity(c * f, d);
  Eigen::MatrixXd ub = qb.householderQ() * Eigen::MatrixXd::Identity(c * f, d);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(ua.transpose() * ub);
  double min_sv = svd.singularValues().minCoeff();
  double angle_deg = std::acos(std::min(1.0, min_sv)) * 180.0 / M_PI;
  CHECK(angle_deg < 15.0);
}

TEST_CASE("identical utterances collapse the tmatrix") {
  Rng rng(12);
  const int c = 4, f = 5, d = 3;
  auto ubm = MakeTestUbm(&rng, c, f);
  // identical utterances sitting exactly on the UBM: zero centered stats,
  // hence zero between-utterance variability
  BaumWelchStats one(c, f);
  one.zeroth = Eigen::VectorXd::Constant(c, 100.0);
  std::vector<BaumWelchStats> stats(20, one);
  auto tmat = TrainTMatrix(stats, ubm, d, 8, 77);
  double init_scale = 0.1 * std::sqrt(static_cast<double>(c * f));
  CHECK(tmat.t.colwise().norm().maxCoeff() < 0.05 * init_scale);
}

TEST_CASE("generative ivector recovery has high cosine to truth") {
  Rng rng(13);
  const int c = 8, f = 10, d = 4;
  auto ubm = MakeTestUbm(&rng, c, f);
  Eigen::MatrixXd t_true(c * f, d);
  for (int i = 0; i < c * f; ++i)
    for (int j = 0; j < d; ++j) t_true(i, j) = 0.8 * rng.Normal();
  TMatrix tmat;
  tmat.feat_dim = f;
  tmat.t = t_true;

  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd w_true(d);
    for (int j = 0; j < d; ++j) w_true(j) = rng.Normal();
    auto frames = DrawFromModel(&rng, ubm, t_true, w_true, 500);
    auto stats = AccumulateStats(frames, ubm);
    auto w = ExtractIvector(stats, ubm, tmat);
    double cosine = w.dot(w_true) / (w.norm() * w_true.norm());
    CHECK(cosine > 0.9);
  }
}

TEST_CASE("select_speaker_frames applies the 0.8 dominance rule") {
  Eigen::MatrixXd v(2, 4);
  v << 0.9, 0.05, 0.03, 0.02,
       0.5, 0.5, 0.0, 0.0;
  ProbStream probs(v, FrameClock(100.0), {"a", "b", "c", "d"});
  auto w0 = SelectSpeakerFrames(probs, 0);
  CHECK(w0(0) == doctest::Approx(0.9));
  CHECK(w0(1) == 0.0);  // 0.5 does not dominate 0.8 * 1.0
  for (int s = 1; s < 4; ++s) {
    auto w = SelectSpeakerFrames(probs, s);
    CHECK(w(0) == 0.0);
    CHECK(w(1) == 0.0);
  }
}

TEST_CASE("select_speaker_frames equals the brute-force filter") {
  Rng rng(14);
  Eigen::MatrixXd v(50, 4);
  for (int t = 0; t < 50; ++t)
    for (int s = 0; s < 4; ++s) v(t, s) = rng.Uniform();
  ProbStream probs(v, FrameClock(100.0), {"a", "b", "c", "d"});
  for (int s = 0; s < 4; ++s) {
    auto w = SelectSpeakerFrames(probs, s);
    for (int t = 0; t < 50; ++t) {
      double total = v.row(t).sum();
      double expect = v(t, s) > 0.8 * total ? v(t, s) : 0.0;
      CHECK(w(t) == doctest::Approx(expect));
    }
  }
}

TEST_CASE("all-zero probability rows select nothing") {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(3, 4);
  ProbStream probs(v, FrameClock(100.0), {"a", "b", "c", "d"});
  auto w = SelectSpeakerFrames(probs, 2);
  CHECK(w.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ubm and tmatrix serialization round trip") {
  Rng rng(15);
  auto ubm = MakeTestUbm(&rng, 4, 3);
  SaveUbm("/tmp/tsdiar_ubm.bin", ubm);
  auto back = LoadUbm("/tmp/tsdiar_ubm.bin");
  CHECK((back.means - ubm.means).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.vars - ubm.vars).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.weights - ubm.weights).cwiseAbs().maxCoeff() == 0.0);

  TMatrix tmat;
  tmat.feat_dim = 3;
  tmat.t.resize(12, 2);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 2; ++j) tmat.t(i, j) = rng.Normal();
  SaveTMatrix("/tmp/tsdiar_tmat.bin", tmat);
  auto tback = LoadTMatrix("/tmp/tsdiar_tmat.bin");
  CHECK((tback.t - tmat.t).cwiseAbs().maxCoeff() == 0.0);
  CHECK(tback.feat_dim == 3);
}
