#include <cmath>
#include <vector>

#include "doctest.h"
#include "spectrank/errors.hpp"
#include "spectrank/moments.hpp"
#include "spectrank/synth.hpp"
#include "testutil.hpp"

using spectrank::DataError;
using spectrank::ParamError;
using spectrank::RngState;
namespace moments = spectrank::moments;
namespace synth = spectrank::synth;

TEST_CASE("moments: m1 counts frequencies") {
  const auto one = testutil::make_corpus(2, {{{0, 1}, {1, 2}}});
  const Eigen::VectorXd m1 = moments::empirical_m1(one);
  CHECK(m1(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(m1(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  const auto two = testutil::make_corpus(2, {{{0, 2}}, {{1, 2}}});
  const Eigen::VectorXd pooled = moments::empirical_m1(two);
  CHECK(pooled(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pooled(1) == doctest::Approx(0.5).epsilon(1e-14));

  CHECK(moments::empirical_m1(two).sum() ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(moments::empirical_m1(synth::Corpus{}), DataError);
}

TEST_CASE("moments: m1 concentrates on a near-degenerate topic") {
  const auto params = synth::LdaParams::symmetric(1, 10, 1.0, 1e-3);
  const auto [corpus, truth] =
      synth::generate_lda_corpus(params, 2000, 50, RngState(31, 0));
  const Eigen::VectorXd m1 = moments::empirical_m1(corpus);
  const double n = 2000.0 * 50.0;
  for (int v = 0; v < 10; ++v) {
    const double p = truth.topics(v, 0);
    const double se = std::sqrt(std::max(p * (1.0 - p) / n, 1e-30));
    CHECK(std::abs(m1(v) - p) <= std::max(6.0 * se, 1e-12));
  }
}

TEST_CASE("moments: single-document hand case") {
  // V=2, counts {w0:2}, alpha0=1: pair term [[1,0],[0,0]], M1=(1,0),
  // result [[0.5,0],[0,0]].
  const auto corpus = testutil::make_corpus(2, {{{0, 2}}});
  const Eigen::MatrixXd m2 = moments::empirical_m2_lda(corpus, 1.0);
  CHECK(m2(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m2(0, 1) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(m2(1, 0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(m2(1, 1) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("moments: count identity equals the ordered-pair sum") {
  RngState rng(32, 0);
  for (int rep = 0; rep < 12; ++rep) {
    RngState case_rng = rng.substream(rep);
    const auto corpus = testutil::random_small_corpus(case_rng, 5, 6, 8);
    const double alpha0 = 0.5 + 2.0 * case_rng.uniform01();
    const Eigen::MatrixXd fast = moments::empirical_m2_lda(corpus, alpha0);
    const Eigen::MatrixXd slow = testutil::brute_force_m2(corpus, alpha0);
    const double scale = 1.0 + testutil::max_abs(slow);
    CHECK(testutil::max_abs(fast - slow) <= 1e-14 * scale);
  }
}

TEST_CASE("moments: pairwise tree agrees with the serial definition at scale") {
  // 300 documents crosses several tree levels; the reassociation must stay
  // within 1e-12 relative of the plain serial sum.
  RngState rng(33, 0);
  std::vector<std::vector<std::pair<int32_t, int32_t>>> docs;
  for (int d = 0; d < 300; ++d) {
    std::vector<int32_t> counts(12, 0);
    const int len = 2 + static_cast<int>(rng.next_u64() % 25);
    for (int l = 0; l < len; ++l) {
      ++counts[rng.next_u64() % 12];
    }
    std::vector<std::pair<int32_t, int32_t>> entries;
    for (int32_t w = 0; w < 12; ++w) {
      if (counts[w] > 0) {
        entries.emplace_back(w, counts[w]);
      }
    }
    docs.push_back(std::move(entries));
  }
  const auto corpus = testutil::make_corpus(12, docs);
  const Eigen::MatrixXd fast = moments::empirical_m2_lda(corpus, 2.0);
  const Eigen::MatrixXd slow = testutil::brute_force_m2(corpus, 2.0);
  CHECK(testutil::max_abs(fast - slow) <=
        1e-12 * (1.0 + testutil::max_abs(slow)));
}

TEST_CASE("moments: m2 is unbiased for the true moment") {
  const auto params = synth::LdaParams::symmetric(2, 6, 1.0, 1.0);
  RngState rng(34, 0);
  const auto [seed_corpus, truth] =
      synth::generate_lda_corpus(params, 1, 2, rng.substream(0));
  const Eigen::MatrixXd m2_true =
      synth::true_second_moment_lda(truth.topics, params.alpha);

  const int reps = 400;
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(6, 6);
  Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(6, 6);
  for (int r = 0; r < reps; ++r) {
    const auto [corpus, unused] = synth::generate_lda_corpus_with_topics(
        truth.topics, params.alpha, 50, 5, rng.substream(100 + r));
    const Eigen::MatrixXd m2 = moments::empirical_m2_lda(corpus, 2.0);
    mean += m2;
    sq += m2.cwiseProduct(m2);
  }
  mean /= reps;
  sq /= reps;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const double se = std::sqrt(
          std::max(sq(i, j) - mean(i, j) * mean(i, j), 1e-30) / reps);
      CHECK(std::abs(mean(i, j) - m2_true(i, j)) <=
            4.0 * se + 1e-12);
    }
  }
}

TEST_CASE("moments: Monte Carlo mean converges at the 1/sqrt(R) rate") {
  const auto params = synth::LdaParams::symmetric(5, 50, 1.0, 1.0);
  RngState rng(35, 0);
  const auto [seed_corpus, truth] =
      synth::generate_lda_corpus(params, 1, 2, rng.substream(0));
  const Eigen::MatrixXd m2_true =
      synth::true_second_moment_lda(truth.topics, params.alpha);

  Eigen::MatrixXd running = Eigen::MatrixXd::Zero(50, 50);
  int done = 0;
  std::vector<double> errors;
  for (const int target : {25, 100, 400}) {
    while (done < target) {
      const auto [corpus, unused] = synth::generate_lda_corpus_with_topics(
          truth.topics, params.alpha, 200, 50, rng.substream(1000 + done));
      running += moments::empirical_m2_lda(corpus, 5.0);
      ++done;
    }
    errors.push_back((running / done - m2_true).norm());
  }
  // Quadrupling R should halve the error; the spec allows [1.4, 2.9].
  CHECK(errors[0] / errors[1] >= 1.4);
  CHECK(errors[0] / errors[1] <= 2.9);
  CHECK(errors[1] / errors[2] >= 1.4);
  CHECK(errors[1] / errors[2] <= 2.9);
}

TEST_CASE("moments: m2 input validation") {
  const auto corpus = testutil::make_corpus(3, {{{0, 2}}});
  CHECK_THROWS_AS(moments::empirical_m2_lda(corpus, 0.0), ParamError);
  CHECK_THROWS_AS(moments::empirical_m2_lda(corpus, -1.0), ParamError);
  const auto short_doc = testutil::make_corpus(3, {{{0, 2}}, {{1, 1}}});
  CHECK_THROWS_AS(moments::empirical_m2_lda(short_doc, 1.0), DataError);
  CHECK_THROWS_AS(moments::empirical_m2_lda(synth::Corpus{}, 1.0), DataError);
}

TEST_CASE("moments: gmm hand case and sigma=0 scatter") {
  Eigen::MatrixXd points(1, 2);
  points << 1.0, 0.0;
  const Eigen::MatrixXd m2 = moments::empirical_m2_gmm(points, 1.0);
  CHECK(m2(0, 0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(m2(1, 1) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(m2(0, 1) == doctest::Approx(0.0).epsilon(1e-14));

  Eigen::MatrixXd two(2, 2);
  two << 1.0, 2.0, 3.0, 4.0;
  const Eigen::MatrixXd scatter = moments::empirical_m2_gmm(two, 0.0);
  CHECK(scatter(0, 0) == doctest::Approx((1.0 + 9.0) / 2.0).epsilon(1e-14));
  CHECK(scatter(0, 1) == doctest::Approx((2.0 + 12.0) / 2.0).epsilon(1e-14));
  CHECK(scatter(1, 1) == doctest::Approx((4.0 + 16.0) / 2.0).epsilon(1e-14));

  CHECK_THROWS_AS(moments::empirical_m2_gmm(points, -0.5), ParamError);
  CHECK_THROWS_AS(moments::empirical_m2_gmm(Eigen::MatrixXd(), 1.0),
                  DataError);
}

TEST_CASE("moments: gmm m2 is unbiased for fixed means and weights") {
  Eigen::MatrixXd means(3, 2);
  means << 1.0, -0.5, 0.0, 2.0, -1.0, 0.5;
  Eigen::VectorXd weights(2);
  weights << 0.3, 0.7;
  const Eigen::MatrixXd truth = synth::true_second_moment_gmm(means, weights);

  RngState rng(36, 0);
  const int reps = 400;
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(3, 3);
  Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(3, 3);
  for (int r = 0; r < reps; ++r) {
    const auto data = synth::generate_gmm_dataset_with(means, weights, 0.8,
                                                       200, rng.substream(r));
    const Eigen::MatrixXd m2 = moments::empirical_m2_gmm(data.points, 0.8);
    mean += m2;
    sq += m2.cwiseProduct(m2);
  }
  mean /= reps;
  sq /= reps;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double se = std::sqrt(
          std::max(sq(i, j) - mean(i, j) * mean(i, j), 1e-30) / reps);
      CHECK(std::abs(mean(i, j) - truth(i, j)) <= 4.0 * se + 1e-12);
    }
  }
}

TEST_CASE("moments: residual values and norms") {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 0.0, 0.0, 1.0;
  const auto [zero, norms_zero] = moments::residual(a, a);
  CHECK(zero.norm() == 0.0);
  CHECK(norms_zero.frobenius == 0.0);
  CHECK(norms_zero.spectral == 0.0);

  Eigen::MatrixXd truth(2, 2);
  truth << 3.0, 0.0, 0.0, -4.0;
  const Eigen::MatrixXd empirical = Eigen::MatrixXd::Zero(2, 2);
  const auto [r, norms] = moments::residual(empirical, truth);
  CHECK(norms.frobenius == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(norms.spectral == doctest::Approx(4.0).epsilon(1e-12));

  CHECK_THROWS_AS(moments::residual(a, Eigen::MatrixXd::Zero(3, 3)),
                  ParamError);
}

TEST_CASE("moments: norm inequalities on random symmetric residuals") {
  RngState rng(37, 0);
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::MatrixXd r(5, 5);
    for (int i = 0; i < 5; ++i) {
      for (int j = i; j < 5; ++j) {
        const double x = 2.0 * rng.uniform01() - 1.0;
        r(i, j) = x;
        r(j, i) = x;
      }
    }
    const auto [unused, norms] =
        moments::residual(Eigen::MatrixXd::Zero(5, 5), r);
    CHECK(norms.spectral <= norms.frobenius * (1.0 + 1e-12));
    CHECK(norms.frobenius <= std::sqrt(5.0) * norms.spectral * (1.0 + 1e-12));
  }
}

TEST_CASE("moments: outputs are symmetric") {
  RngState rng(38, 0);
  const auto corpus = testutil::random_small_corpus(rng, 20, 12, 10);
  const Eigen::MatrixXd m2 = moments::empirical_m2_lda(corpus, 1.5);
  CHECK((m2 - m2.transpose()).norm() == 0.0);

  const auto params = synth::LdaParams::symmetric(2, 8, 1.0, 1.0);
  synth::GmmParams gp;
  gp.num_components = 2;
  gp.dim = 6;
  gp.sigma = 1.0;
  gp.sigma_mu = 1.0;
  gp.alpha = 1.0;
  const auto data = synth::generate_gmm_dataset(gp, 333, RngState(39, 0));
  const Eigen::MatrixXd g = moments::empirical_m2_gmm(data.points, 1.0);
  CHECK((g - g.transpose()).norm() == 0.0);
}
