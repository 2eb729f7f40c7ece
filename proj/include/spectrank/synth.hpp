#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "spectrank/rng.hpp"

namespace spectrank::synth {

/// One bag-of-words document: sorted (word id, count) entries with count >= 1
/// and the total word count cached.
struct Document {
  std::vector<std::pair<int32_t, int32_t>> entries;
  int64_t length = 0;
};

struct Corpus {
  int32_t vocab = 0;
  std::vector<Document> docs;

  int64_t total_words() const;
  int64_t min_doc_length() const;
  /// Checks word ids < vocab, counts >= 1, lengths consistent; throws
  /// DataError on violation.
  void validate() const;
};

struct LdaParams {
  int32_t num_topics = 0;     // K
  int32_t vocab = 0;          // V
  std::vector<double> alpha;  // per-topic Dirichlet weights, length K
  double beta = 0.0;          // symmetric word-level weight

  double alpha0() const;
  void validate() const;
  static LdaParams symmetric(int32_t K, int32_t V, double alpha, double beta);
};

struct LdaGroundTruth {
  Eigen::MatrixXd topics;     // V x K, columns are word distributions
  std::vector<double> alpha;  // echo of the generating alpha
  Eigen::MatrixXd mixings;    // K x D, column d is h_d
  // Per-word topic assignments z; populated only on request.
  std::vector<std::vector<int32_t>> assignments;
};

struct LdaGenOptions {
  bool keep_assignments = false;
};

/// Draws topics from Dir(beta * 1_V), then per document h_d ~ Dir(alpha)
/// followed by L words via z ~ Multi(h_d), word ~ Multi(topic_z), aggregated
/// into counts. Requires D >= 1 and L >= 2 (the second-order moment needs
/// word pairs).
std::pair<Corpus, LdaGroundTruth> generate_lda_corpus(const LdaParams& params,
                                                      int32_t num_docs,
                                                      int32_t doc_length,
                                                      RngState rng,
                                                      LdaGenOptions options = {});

/// Same generative process with caller-supplied topics; used for Monte Carlo
/// repetitions that hold topics fixed.
std::pair<Corpus, LdaGroundTruth> generate_lda_corpus_with_topics(
    const Eigen::MatrixXd& topics, std::span<const double> alpha,
    int32_t num_docs, int32_t doc_length, RngState rng,
    LdaGenOptions options = {});

/// M2 = sum_k alpha_k / (alpha0 (alpha0+1)) mu_k mu_k^T. Symmetric PSD with
/// rank at most K.
Eigen::MatrixXd true_second_moment_lda(const Eigen::MatrixXd& topics,
                                       std::span<const double> alpha);

struct GmmParams {
  int32_t num_components = 0;  // K
  int32_t dim = 0;             // m, must satisfy m >= K
  double sigma = 0.0;          // component standard deviation
  double sigma_mu = 0.0;       // mean-prior standard deviation
  double alpha = 0.0;          // symmetric Dirichlet weight hyperparameter

  void validate() const;
};

struct GmmDataset {
  Eigen::MatrixXd points;   // N x m, one point per row
  Eigen::MatrixXd means;    // m x K
  Eigen::VectorXd weights;  // K, on the simplex
  std::vector<int32_t> assignments;
};

/// means ~ N(0, sigma_mu^2 I) per component, weights ~ Dir(alpha * 1_K),
/// then h_i ~ Multi(w) and x_i ~ N(mu_{h_i}, sigma^2 I).
GmmDataset generate_gmm_dataset(const GmmParams& params, int64_t num_points,
                                RngState rng);

/// Same with fixed means/weights for controlled tests.
GmmDataset generate_gmm_dataset_with(const Eigen::MatrixXd& means,
                                     const Eigen::VectorXd& weights,
                                     double sigma, int64_t num_points,
                                     RngState rng);

/// M2 = sum_k w_k mu_k mu_k^T; symmetric PSD m x m with rank at most K.
Eigen::MatrixXd true_second_moment_gmm(const Eigen::MatrixXd& means,
                                       const Eigen::VectorXd& weights);

}  // namespace spectrank::synth
