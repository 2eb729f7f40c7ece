#include "spectrank/moments.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include "spectrank/errors.hpp"
#include "spectrank/spectra.hpp"

namespace spectrank::moments {

namespace {

constexpr int kDocBlock = 64;

// Binary-counter pairwise accumulator: level i holds the sum of 2^i pushed
// blocks. The combine structure is fixed by push order alone.
template <typename M>
class PairwiseSum {
 public:
  void push(M block) {
    for (size_t lvl = 0;; ++lvl) {
      if (lvl == levels_.size()) {
        levels_.emplace_back(std::move(block));
        break;
      }
      if (!levels_[lvl].has_value()) {
        levels_[lvl] = std::move(block);
        break;
      }
      block += *levels_[lvl];
      levels_[lvl].reset();
    }
  }

  M total(M zero) && {
    M sum = std::move(zero);
    for (auto& level : levels_) {
      if (level.has_value()) {
        sum += *level;
      }
    }
    return sum;
  }

 private:
  std::vector<std::optional<M>> levels_;
};

}  // namespace

Eigen::VectorXd empirical_m1(const synth::Corpus& corpus) {
  if (corpus.docs.empty()) {
    throw DataError("empirical_m1: empty corpus");
  }
  corpus.validate();
  const int32_t V = corpus.vocab;
  PairwiseSum<Eigen::VectorXd> acc;
  Eigen::VectorXd block = Eigen::VectorXd::Zero(V);
  int in_block = 0;
  for (const auto& doc : corpus.docs) {
    for (const auto& [word, count] : doc.entries) {
      block(word) += static_cast<double>(count);
    }
    if (++in_block == kDocBlock) {
      acc.push(std::move(block));
      block = Eigen::VectorXd::Zero(V);
      in_block = 0;
    }
  }
  if (in_block > 0) {
    acc.push(std::move(block));
  }
  Eigen::VectorXd m1 = std::move(acc).total(Eigen::VectorXd::Zero(V));
  m1 /= static_cast<double>(corpus.total_words());
  return m1;
}

Eigen::MatrixXd lda_pair_mean(const synth::Corpus& corpus) {
  if (corpus.docs.empty()) {
    throw DataError("lda_pair_mean: empty corpus");
  }
  corpus.validate();
  for (size_t d = 0; d < corpus.docs.size(); ++d) {
    if (corpus.docs[d].length < 2) {
      throw DataError("lda_pair_mean: document " + std::to_string(d) +
                      " has fewer than 2 words");
    }
  }

  const int32_t V = corpus.vocab;
  const auto D = static_cast<double>(corpus.docs.size());

  PairwiseSum<Eigen::MatrixXd> acc;
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(V, V);
  int in_block = 0;
  for (const auto& doc : corpus.docs) {
    const double len = static_cast<double>(doc.length);
    const double w = 1.0 / (len * (len - 1.0));
    for (const auto& [j, cj] : doc.entries) {
      double* col = block.col(j).data();
      const double wcj = w * static_cast<double>(cj);
      for (const auto& [i, ci] : doc.entries) {
        col[i] += wcj * static_cast<double>(ci);
      }
    }
    for (const auto& [i, ci] : doc.entries) {
      block(i, i) -= w * static_cast<double>(ci);
    }
    if (++in_block == kDocBlock) {
      acc.push(std::move(block));
      block = Eigen::MatrixXd::Zero(V, V);
      in_block = 0;
    }
  }
  if (in_block > 0) {
    acc.push(std::move(block));
  }
  Eigen::MatrixXd pair_mean =
      std::move(acc).total(Eigen::MatrixXd::Zero(V, V));
  pair_mean /= D;
  return pair_mean;
}

Eigen::MatrixXd lda_m2_from_pair_mean(const Eigen::MatrixXd& pair_mean,
                                      const Eigen::VectorXd& m1,
                                      double alpha0) {
  if (!(alpha0 > 0.0)) {
    throw ParamError("lda_m2_from_pair_mean: alpha0 must be > 0");
  }
  if (pair_mean.rows() != pair_mean.cols() || pair_mean.rows() != m1.size()) {
    throw ParamError("lda_m2_from_pair_mean: dimension mismatch");
  }
  Eigen::MatrixXd m2 =
      pair_mean - (alpha0 / (alpha0 + 1.0)) * (m1 * m1.transpose());
  return ((m2 + m2.transpose()) * 0.5).eval();
}

Eigen::MatrixXd empirical_m2_lda(const synth::Corpus& corpus, double alpha0) {
  if (!(alpha0 > 0.0)) {
    throw ParamError("empirical_m2_lda: alpha0 must be > 0");
  }
  const Eigen::MatrixXd pair_mean = lda_pair_mean(corpus);
  return lda_m2_from_pair_mean(pair_mean, empirical_m1(corpus), alpha0);
}

Eigen::MatrixXd empirical_m2_gmm(const Eigen::MatrixXd& points, double sigma) {
  if (points.rows() < 1 || points.cols() < 1) {
    throw DataError("empirical_m2_gmm: empty dataset");
  }
  if (!points.allFinite()) {
    throw DataError("empirical_m2_gmm: non-finite point coordinates");
  }
  if (sigma < 0.0) {
    throw ParamError("empirical_m2_gmm: sigma must be >= 0");
  }
  const Eigen::Index N = points.rows();
  const Eigen::Index m = points.cols();
  constexpr Eigen::Index kPointBlock = 256;

  PairwiseSum<Eigen::MatrixXd> acc;
  for (Eigen::Index start = 0; start < N; start += kPointBlock) {
    const Eigen::Index n = std::min(kPointBlock, N - start);
    const auto chunk = points.middleRows(start, n);
    acc.push(chunk.transpose() * chunk);
  }
  Eigen::MatrixXd scatter = std::move(acc).total(Eigen::MatrixXd::Zero(m, m));
  scatter /= static_cast<double>(N);
  scatter -= (sigma * sigma) * Eigen::MatrixXd::Identity(m, m);
  return ((scatter + scatter.transpose()) * 0.5).eval();
}

std::pair<Eigen::MatrixXd, ResidualNorms> residual(
    const Eigen::MatrixXd& empirical, const Eigen::MatrixXd& truth) {
  if (empirical.rows() != truth.rows() || empirical.cols() != truth.cols()) {
    throw ParamError("residual: dimension mismatch");
  }
  Eigen::MatrixXd r = truth - empirical;
  ResidualNorms norms;
  norms.frobenius = r.norm();
  const spectra::Spectrum sv = spectra::singular_values_symmetric(r);
  norms.spectral = sv.values.empty() ? 0.0 : sv.values.front();
  return {std::move(r), norms};
}

}  // namespace spectrank::moments
